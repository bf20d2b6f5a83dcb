//! Monte Carlo checks: empirical characteristic functions against closed
//! forms, two-sample Kolmogorov–Smirnov, and the strict-stability identity
//! c₁Y + c₂Ȳ =ᵈ (c₁^α + c₂^α)^{1/α} Y′.

use std::io::{self, Write};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::levy::{cf_stable, StableLaw};
use crate::linalg::dot;
use crate::shotnoise::SampleBatch;

/// Monte Carlo constant c in the bound c/√N.
pub const MC_CONSTANT: f64 = 3.5;

/// Multiplier of √((n₁+n₂)/(n₁n₂)) in the two-sample thresholds.
pub const KS_CONSTANT: f64 = 1.95;

/// Points on a regular lattice in [−h, h]^k, k = min(d, 2), padded with
/// zeros up to dimension d.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    dim: usize,
    points: Vec<Vec<f64>>,
}

impl Grid {
    pub fn new(dim: usize, per_axis: usize, half_width: f64) -> Result<Self> {
        if dim == 0 || per_axis == 0 || !(half_width >= 0.0) {
            return invalid(format!(
                "grid needs dim ≥ 1, points ≥ 1 and width ≥ 0 (got {dim}, {per_axis}, {half_width})"
            ));
        }
        let axis: Vec<f64> = if per_axis == 1 {
            vec![0.0]
        } else {
            let step = 2.0 * half_width / (per_axis - 1) as f64;
            (0..per_axis)
                .map(|i| -half_width + step * i as f64)
                .collect()
        };
        let mut points = Vec::new();
        if dim == 1 {
            points.extend(axis.iter().map(|&x| vec![x]));
        } else {
            for &x in &axis {
                for &y in &axis {
                    let mut p = vec![0.0; dim];
                    p[0] = x;
                    p[1] = y;
                    points.push(p);
                }
            }
        }
        Ok(Grid { dim, points })
    }

    /// 61 points per axis on [−3, 3].
    pub fn standard(dim: usize) -> Self {
        Grid::new(dim, 61, 3.0).expect("valid defaults")
    }

    pub fn from_points(dim: usize, points: Vec<Vec<f64>>) -> Result<Self> {
        if points.is_empty() {
            return invalid("grid is empty");
        }
        if let Some(p) = points.iter().find(|p| p.len() != dim) {
            return Err(Error::Dimension {
                expected: dim,
                got: p.len(),
            });
        }
        Ok(Grid { dim, points })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// N^{−1} Σ_n exp(i⟨z, X_n⟩) at every grid point.
pub fn ecf(samples: &SampleBatch, grid: &Grid) -> Vec<Complex64> {
    assert_eq!(
        samples.dim(),
        grid.dim(),
        "grid and samples differ in dimension"
    );
    let n = samples.len() as f64;
    grid.points()
        .par_iter()
        .map(|z| {
            if z.iter().all(|&v| v == 0.0) {
                return Complex64::new(1.0, 0.0);
            }
            let (mut re, mut im) = (0.0, 0.0);
            for x in samples.rows() {
                let (s, c) = dot(z, x).sin_cos();
                re += c;
                im += s;
            }
            Complex64::new(re / n, im / n)
        })
        .collect()
}

/// max(c/√N, 2·tail + 0.005).
pub fn cf_tolerance(n: usize, tail: f64) -> f64 {
    (MC_CONSTANT / (n as f64).sqrt()).max(2.0 * tail + 0.005)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CfReport {
    pub grid: Grid,
    pub empirical: Vec<Complex64>,
    pub theoretical: Vec<Complex64>,
    pub sup_distance: f64,
    /// c/√N.
    pub mc_bound: f64,
    /// Pass threshold, see [`cf_tolerance`].
    pub tolerance: f64,
    pub samples: usize,
}

impl CfReport {
    pub fn passed(&self) -> bool {
        self.sup_distance <= self.tolerance
    }

    /// Grid point where the distance is largest.
    pub fn worst_point(&self) -> &[f64] {
        let k = self
            .empirical
            .iter()
            .zip(&self.theoretical)
            .map(|(a, b)| (a - b).norm())
            .enumerate()
            .fold(
                (0, f64::NEG_INFINITY),
                |acc, (i, v)| if v > acc.1 { (i, v) } else { acc },
            )
            .0;
        &self.grid.points()[k]
    }

    pub fn write_csv<W: Write>(&self, out: &mut W, header: &[String]) -> io::Result<()> {
        for line in header {
            writeln!(out, "# {line}")?;
        }
        let zs: Vec<String> = (1..=self.grid.dim()).map(|k| format!("z{k}")).collect();
        writeln!(out, "{},emp_re,emp_im,th_re,th_im,abs_diff", zs.join(","))?;
        for ((z, e), t) in self
            .grid
            .points()
            .iter()
            .zip(&self.empirical)
            .zip(&self.theoretical)
        {
            let zs: Vec<String> = z.iter().map(|v| v.to_string()).collect();
            writeln!(
                out,
                "{},{},{},{},{},{}",
                zs.join(","),
                e.re,
                e.im,
                t.re,
                t.im,
                (e - t).norm()
            )?;
        }
        Ok(())
    }

    pub fn summary(&self) -> String {
        format!(
            "samples: {}\ngrid points: {}\nsup distance: {:.6}\nmc bound: {:.6}\ntolerance: {:.6}\nworst point: {:?}\nverdict: {}\n",
            self.samples,
            self.grid.len(),
            self.sup_distance,
            self.mc_bound,
            self.tolerance,
            self.worst_point(),
            if self.passed() { "pass" } else { "fail" }
        )
    }
}

/// Compare the empirical CF of `samples` with the CF of `law`. The
/// tolerance uses the batch's mean tail diagnostic.
pub fn cf_sup_distance(samples: &SampleBatch, law: &StableLaw, grid: &Grid) -> Result<CfReport> {
    if grid.is_empty() {
        return invalid("grid is empty");
    }
    if law.dim() != samples.dim() || grid.dim() != samples.dim() {
        return Err(Error::Dimension {
            expected: samples.dim(),
            got: law.dim(),
        });
    }
    if samples.is_empty() {
        return invalid("no samples");
    }
    let empirical = ecf(samples, grid);
    let theoretical = grid
        .points()
        .iter()
        .map(|z| cf_stable(law, z))
        .collect::<Result<Vec<_>>>()?;
    let sup_distance = empirical
        .iter()
        .zip(&theoretical)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    let n = samples.len();
    Ok(CfReport {
        grid: grid.clone(),
        empirical,
        theoretical,
        sup_distance,
        mc_bound: MC_CONSTANT / (n as f64).sqrt(),
        tolerance: cf_tolerance(n, samples.mean_tail_diagnostic()),
        samples: n,
    })
}

/// sup_x |F₁(x) − F₂(x)| for the two empirical distribution functions.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    if a.is_empty() || b.is_empty() {
        return if a.len() == b.len() { 0.0 } else { 1.0 };
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// c·√((n₁+n₂)/(n₁n₂)).
pub fn ks_threshold(n1: usize, n2: usize) -> f64 {
    let (n1, n2) = (n1 as f64, n2 as f64);
    KS_CONSTANT * ((n1 + n2) / (n1 * n2)).sqrt()
}

#[derive(Debug, Clone, PartialEq)]
pub enum StabilityMethod {
    /// Two-sample Kolmogorov–Smirnov on the first coordinate (d = 1).
    Ks,
    /// Sup distance between the two empirical CFs on a grid.
    Cf(Grid),
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilityOutcome {
    pub statistic: f64,
    pub threshold: f64,
    pub passed: bool,
}

/// Compare c₁Y + c₂Ȳ with (c₁^α + c₂^α)^{1/α} Y′ for given batches.
pub fn stability_statistic(
    alpha: f64,
    c1: f64,
    c2: f64,
    y: &SampleBatch,
    ybar: &SampleBatch,
    yprime: &SampleBatch,
    method: &StabilityMethod,
) -> Result<StabilityOutcome> {
    if !(c1 > 0.0 && c2 > 0.0 && c1.is_finite() && c2.is_finite()) {
        return invalid(format!(
            "scale factors must be positive, got c1 = {c1}, c2 = {c2}"
        ));
    }
    if !(alpha > 0.0 && alpha <= 2.0) {
        return invalid(format!("alpha = {alpha} outside (0,2]"));
    }
    if y.len() != ybar.len() || y.dim() != ybar.dim() || y.dim() != yprime.dim() {
        return invalid("batches differ in shape");
    }
    let left = y.combine(c1, ybar, c2);
    let right = yprime.scaled((c1.powf(alpha) + c2.powf(alpha)).powf(1.0 / alpha));
    let (n1, n2) = (left.len(), right.len());
    let (statistic, threshold) = match method {
        StabilityMethod::Ks => {
            if y.dim() != 1 {
                return invalid(format!("KS variant needs d = 1, got {}", y.dim()));
            }
            (
                ks_two_sample(&left.coordinate(0), &right.coordinate(0)),
                ks_threshold(n1, n2),
            )
        }
        StabilityMethod::Cf(grid) => {
            let a = ecf(&left, grid);
            let b = ecf(&right, grid);
            let d = a
                .iter()
                .zip(&b)
                .map(|(x, y)| (x - y).norm())
                .fold(0.0, f64::max);
            let tail = y.mean_tail_diagnostic().max(yprime.mean_tail_diagnostic());
            let noise = MC_CONSTANT * ((n1 + n2) as f64 / (n1 * n2) as f64).sqrt();
            (d, noise.max(2.0 * (c1 + c2) * tail + 0.005))
        }
    };
    Ok(StabilityOutcome {
        statistic,
        threshold,
        passed: statistic <= threshold,
    })
}

/// Draw Y, Ȳ, Y′ as `sampler(0, n)`, `sampler(1, n)`, `sampler(2, n)` and
/// run [`stability_statistic`].
pub fn stability_test<F>(
    alpha: f64,
    mut sampler: F,
    c1: f64,
    c2: f64,
    n: usize,
    method: &StabilityMethod,
) -> Result<StabilityOutcome>
where
    F: FnMut(u64, usize) -> SampleBatch,
{
    if !(c1 > 0.0 && c2 > 0.0) {
        return invalid(format!(
            "scale factors must be positive, got c1 = {c1}, c2 = {c2}"
        ));
    }
    let y = sampler(0, n);
    let ybar = sampler(1, n);
    let yprime = sampler(2, n);
    stability_statistic(alpha, c1, c2, &y, &ybar, &yprime, method)
}
