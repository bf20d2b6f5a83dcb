//! Shot-noise series θ^{1/α} Σ_j Γ_j^{−1/α} V_j and the compound-Poisson
//! stochastic integral Σ_{τ_j ≤ T} τ_j^{−1/α} V_j it equals path by path.
//!
//! Randomness: every sample index owns its own ChaCha8 stream (key from the
//! 64-bit seed, stream id = sample index), so output does not depend on
//! thread count or evaluation order. Within a stream the draws alternate:
//! one unit exponential (ziggurat), then one uniform selecting the jump
//! (skipped for one-point jump laws).
//! Γ_j is the running sum of the exponentials and τ_j = Γ_j / θ.

use std::io::{self, Write};

use rand::distr::StandardUniform;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::levy::{Atom, AtomicMeasure, DEFAULT_TOL};
use crate::linalg::norm;
use crate::special::ln_gamma;

/// The RNG for sample `index` of a run seeded with `seed`.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn unit_exponential<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(Exp1)
}

/// Finite discrete law of the jumps V = θ^{−1}ν.
#[derive(Debug, Clone, PartialEq)]
pub struct JumpLaw {
    dim: usize,
    points: Vec<Vec<f64>>,
    probs: Vec<f64>,
    cumulative: Vec<f64>,
}

impl JumpLaw {
    pub fn new(dim: usize, atoms: Vec<(Vec<f64>, f64)>) -> Result<Self> {
        if dim == 0 {
            return invalid("dimension must be >= 1");
        }
        if atoms.is_empty() {
            return invalid("jump law needs at least one point");
        }
        for (x, p) in &atoms {
            if x.len() != dim {
                return Err(Error::Dimension {
                    expected: dim,
                    got: x.len(),
                });
            }
            if x.iter().all(|&c| c == 0.0) || x.iter().any(|c| !c.is_finite()) {
                return invalid(format!("jump {x:?} must be finite and nonzero"));
            }
            if !(*p > 0.0) {
                return invalid(format!("jump probability {p} must be > 0"));
            }
        }
        let total: f64 = atoms.iter().map(|(_, p)| p).sum();
        if (total - 1.0).abs() > DEFAULT_TOL {
            return invalid(format!("jump probabilities sum to {total}, expected 1"));
        }
        let mut acc = 0.0;
        let cumulative = atoms
            .iter()
            .map(|(_, p)| {
                acc += p;
                acc
            })
            .collect();
        let (points, probs) = atoms.into_iter().unzip();
        Ok(JumpLaw {
            dim,
            points,
            probs,
            cumulative,
        })
    }

    /// Uniform law on the given points.
    pub fn uniform(dim: usize, points: Vec<Vec<f64>>) -> Result<Self> {
        let p = 1.0 / points.len().max(1) as f64;
        JumpLaw::new(dim, points.into_iter().map(|x| (x, p)).collect())
    }

    /// (θ, θ^{−1}ν) for a nonzero finite measure.
    pub fn from_levy_measure(nu: &AtomicMeasure) -> Result<(f64, Self)> {
        let theta = nu.total_mass();
        if nu.is_zero() {
            return invalid("zero Lévy measure has no jump law");
        }
        let law = JumpLaw::new(
            nu.dim(),
            nu.atoms()
                .iter()
                .map(|a| (a.point.clone(), a.mass / theta))
                .collect(),
        )?;
        Ok((theta, law))
    }

    /// θ · law as a Lévy measure.
    pub fn to_levy_measure(&self, theta: f64) -> Result<AtomicMeasure> {
        AtomicMeasure::new(
            self.dim,
            self.points
                .iter()
                .zip(&self.probs)
                .map(|(x, p)| Atom::new(x.clone(), theta * p))
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn mean(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        for (x, p) in self.points.iter().zip(&self.probs) {
            for (o, c) in out.iter_mut().zip(x) {
                *o += p * c;
            }
        }
        out
    }

    /// E|V|^q.
    pub fn abs_moment(&self, q: f64) -> f64 {
        self.points
            .iter()
            .zip(&self.probs)
            .map(|(x, p)| p * norm(x).powf(q))
            .sum()
    }

    fn draw_index<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        if self.points.len() == 1 {
            return 0;
        }
        let u: f64 = rng.sample(StandardUniform);
        self.cumulative
            .partition_point(|&c| c <= u)
            .min(self.points.len() - 1)
    }
}

/// Truncation of the series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Truncation {
    /// Hard cap J on the number of terms; the fixed term count for α ≥ 1.
    pub max_terms: usize,
    /// For α < 1: stop once the expected tail bound is at most this.
    pub tail_budget: f64,
}

impl Default for Truncation {
    fn default() -> Self {
        Truncation {
            max_terms: 100_000,
            tail_budget: 1e-4,
        }
    }
}

pub const DEFAULT_SEED: u64 = 0x5EED_0F_5AB1E;

#[derive(Debug, Clone, PartialEq)]
pub struct ShotNoiseSpec {
    pub alpha: f64,
    pub theta: f64,
    pub jump_law: JumpLaw,
    pub truncation: Truncation,
    pub seed: u64,
}

impl ShotNoiseSpec {
    pub fn new(
        alpha: f64,
        theta: f64,
        jump_law: JumpLaw,
        truncation: Truncation,
        seed: u64,
    ) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 2.0) {
            return invalid(format!("alpha = {alpha} outside (0,2)"));
        }
        if !(theta > 0.0 && theta.is_finite()) {
            return invalid(format!("theta = {theta} must be > 0"));
        }
        if truncation.max_terms == 0 {
            return invalid("max_terms must be >= 1");
        }
        if !(truncation.tail_budget > 0.0) {
            return invalid("tail_budget must be > 0");
        }
        if alpha >= 1.0 {
            let scale = jump_law.abs_moment(1.0);
            let m = norm(&jump_law.mean());
            if m > DEFAULT_TOL * scale.max(1.0) {
                return Err(Error::Domain(format!(
                    "series diverges for alpha >= 1 unless the jumps have mean zero (|E V| = {m})"
                )));
            }
        }
        Ok(ShotNoiseSpec {
            alpha,
            theta,
            jump_law,
            truncation,
            seed,
        })
    }

    /// Spec driven by the compound Poisson law μ_{(0,ν,0)₀}.
    pub fn from_levy_measure(
        alpha: f64,
        nu: &AtomicMeasure,
        truncation: Truncation,
        seed: u64,
    ) -> Result<Self> {
        let (theta, law) = JumpLaw::from_levy_measure(nu)?;
        ShotNoiseSpec::new(alpha, theta, law, truncation, seed)
    }

    pub fn dim(&self) -> usize {
        self.jump_law.dim
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        ShotNoiseSpec {
            seed,
            ..self.clone()
        }
    }

    /// The Lévy measure θ · jumpLaw.
    pub fn levy_measure(&self) -> AtomicMeasure {
        self.jump_law
            .to_levy_measure(self.theta)
            .expect("validated jump law")
    }
}

/// Arrival times of a rate-`rate` Poisson process on (0, horizon]: unit-rate
/// arrivals Γ_j divided by the rate.
pub fn arrival_times<R: Rng + ?Sized>(rate: f64, horizon: f64, rng: &mut R) -> Vec<f64> {
    assert!(rate > 0.0 && horizon >= 0.0, "rate > 0 and horizon >= 0");
    let mut gamma = 0.0;
    let mut out = Vec::new();
    loop {
        gamma += unit_exponential(rng);
        let t = gamma / rate;
        if t > horizon {
            return out;
        }
        out.push(t);
    }
}

/// Γ^{−1/α} with exact fast paths for 1/α ∈ {1, 2}.
#[derive(Debug, Clone, Copy)]
enum Decay {
    Inverse,
    InverseSquare,
    Power(f64),
}

impl Decay {
    fn new(alpha: f64) -> Self {
        let beta = 1.0 / alpha;
        if beta == 1.0 {
            Decay::Inverse
        } else if beta == 2.0 {
            Decay::InverseSquare
        } else {
            Decay::Power(-beta)
        }
    }

    #[inline]
    fn apply(self, g: f64) -> f64 {
        match self {
            Decay::Inverse => 1.0 / g,
            Decay::InverseSquare => 1.0 / (g * g),
            Decay::Power(p) => g.powf(p),
        }
    }
}

/// Unit-rate arrivals Γ_j paired with jump indices, drawn from one sample
/// stream.
struct JumpStream<'a> {
    rng: ChaCha8Rng,
    gamma: f64,
    law: &'a JumpLaw,
}

impl<'a> JumpStream<'a> {
    fn new(spec: &'a ShotNoiseSpec, index: u64) -> Self {
        JumpStream {
            rng: sample_rng(spec.seed, index),
            gamma: 0.0,
            law: &spec.jump_law,
        }
    }

    #[inline]
    fn next_jump(&mut self) -> (f64, usize) {
        self.gamma += unit_exponential(&mut self.rng);
        (self.gamma, self.law.draw_index(&mut self.rng))
    }
}

/// Expected tail E|θ^{1/α} Σ_{j>J} Γ_j^{−1/α} V_j| ≤ θ^{1/α} E|V| Σ_{j>J}
/// Γ(j−1/α)/Γ(j), with the telescoped sum Γ(J+1−β)/((β−1)Γ(J)), β = 1/α.
/// Defined for α < 1 and J + 1 > 1/α; +∞ otherwise.
pub fn tail_bound(spec: &ShotNoiseSpec, terms: usize) -> f64 {
    let beta = 1.0 / spec.alpha;
    let j = terms as f64;
    if spec.alpha >= 1.0 || terms == 0 || j + 1.0 <= beta {
        return f64::INFINITY;
    }
    let ratio = (ln_gamma(j + 1.0 - beta) - ln_gamma(j)).exp() / (beta - 1.0);
    spec.theta.powf(beta) * spec.jump_law.abs_moment(1.0) * ratio
}

/// Terms always taken before consulting the tail bound: ⌈1/α⌉ + 8.
pub fn minimum_terms(alpha: f64) -> usize {
    (1.0 / alpha).ceil() as usize + 8
}

/// Number of series terms chosen by the truncation policy.
pub fn series_terms(spec: &ShotNoiseSpec) -> usize {
    let cap = spec.truncation.max_terms;
    if spec.alpha >= 1.0 {
        return cap;
    }
    let budget = spec.truncation.tail_budget;
    let lo_start = minimum_terms(spec.alpha).min(cap);
    if tail_bound(spec, lo_start) <= budget {
        return lo_start;
    }
    // the bound decreases in J: bracket, then bisect
    let mut lo = lo_start;
    let mut hi = lo_start;
    loop {
        if hi >= cap {
            if tail_bound(spec, cap) > budget {
                return cap;
            }
            hi = cap;
            break;
        }
        hi = (hi * 2).min(cap);
        if tail_bound(spec, hi) <= budget {
            break;
        }
        lo = hi;
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if tail_bound(spec, mid) <= budget {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Simulated vectors with per-sample diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleBatch {
    dim: usize,
    samples: Vec<f64>,
    pub seed: u64,
    pub terms_used: Vec<usize>,
    pub tail_diagnostic: Vec<f64>,
}

impl SampleBatch {
    pub fn from_rows(dim: usize, rows: Vec<Vec<f64>>, seed: u64) -> Self {
        let n = rows.len();
        SampleBatch {
            dim,
            samples: rows.into_iter().flatten().collect(),
            seed,
            terms_used: vec![0; n],
            tail_diagnostic: vec![0.0; n],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.terms_used.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms_used.is_empty()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.samples[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.samples.chunks(self.dim.max(1))
    }

    /// Coordinate `k` of every sample.
    pub fn coordinate(&self, k: usize) -> Vec<f64> {
        self.rows().map(|r| r[k]).collect()
    }

    pub fn mean_tail_diagnostic(&self) -> f64 {
        if self.is_empty() {
            return 0.0;
        }
        self.tail_diagnostic.iter().sum::<f64>() / self.len() as f64
    }

    /// Row-wise linear map x ↦ a·x + b·y with another batch of the same shape.
    pub fn combine(&self, a: f64, other: &SampleBatch, b: f64) -> SampleBatch {
        assert_eq!(self.dim, other.dim);
        assert_eq!(self.len(), other.len());
        SampleBatch {
            dim: self.dim,
            samples: self
                .samples
                .iter()
                .zip(&other.samples)
                .map(|(x, y)| a * x + b * y)
                .collect(),
            seed: self.seed,
            terms_used: self.terms_used.clone(),
            tail_diagnostic: self.tail_diagnostic.clone(),
        }
    }

    pub fn scaled(&self, c: f64) -> SampleBatch {
        SampleBatch {
            samples: self.samples.iter().map(|x| c * x).collect(),
            ..self.clone()
        }
    }

    /// CSV with a commented header block, one row per sample: coordinates,
    /// then terms_used and tail_diagnostic.
    pub fn write_csv<W: Write>(&self, out: &mut W, header: &[String]) -> io::Result<()> {
        for line in header {
            writeln!(out, "# {line}")?;
        }
        let cols: Vec<String> = (1..=self.dim).map(|k| format!("x{k}")).collect();
        writeln!(out, "{},terms_used,tail_diagnostic", cols.join(","))?;
        for (i, row) in self.rows().enumerate() {
            let coords: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            writeln!(
                out,
                "{},{},{}",
                coords.join(","),
                self.terms_used[i],
                self.tail_diagnostic[i]
            )?;
        }
        Ok(())
    }
}

struct SeriesDraw {
    value: Vec<f64>,
    half_diff: f64,
}

fn series_draw(spec: &ShotNoiseSpec, index: u64, terms: usize, decay: Decay) -> SeriesDraw {
    let dim = spec.dim();
    let mut stream = JumpStream::new(spec, index);
    let mut acc = vec![0.0; dim];
    let mut half = vec![0.0; dim];
    let half_at = terms / 2;
    for j in 1..=terms {
        let (g, k) = stream.next_jump();
        let w = decay.apply(g);
        for (a, x) in acc.iter_mut().zip(&spec.jump_law.points[k]) {
            *a += w * x;
        }
        if j == half_at {
            half.copy_from_slice(&acc);
        }
    }
    let scale = spec.theta.powf(1.0 / spec.alpha);
    let diff: Vec<f64> = acc
        .iter()
        .zip(&half)
        .map(|(a, h)| scale * (a - h))
        .collect();
    SeriesDraw {
        value: acc.into_iter().map(|a| scale * a).collect(),
        half_diff: norm(&diff),
    }
}

/// Draw `n` samples of the truncated series under the spec's policy.
pub fn sample_series(spec: &ShotNoiseSpec, n: usize) -> SampleBatch {
    sample_series_with_terms(spec, n, series_terms(spec))
}

/// Draw `n` samples using exactly `terms` series terms (0 gives zeros).
/// The diagnostic is the analytic tail bound for α < 1 and the partial-sum
/// difference |S_J − S_{J/2}| for α ≥ 1.
pub fn sample_series_with_terms(spec: &ShotNoiseSpec, n: usize, terms: usize) -> SampleBatch {
    let decay = Decay::new(spec.alpha);
    let bound = if spec.alpha < 1.0 {
        Some(if terms == 0 {
            f64::INFINITY
        } else {
            tail_bound(spec, terms)
        })
    } else {
        None
    };
    let draws: Vec<SeriesDraw> = (0..n as u64)
        .into_par_iter()
        .map(|i| series_draw(spec, i, terms, decay))
        .collect();
    let mut samples = Vec::with_capacity(n * spec.dim());
    let mut tail_diagnostic = Vec::with_capacity(n);
    for d in draws {
        samples.extend_from_slice(&d.value);
        tail_diagnostic.push(bound.unwrap_or(d.half_diff));
    }
    SampleBatch {
        dim: spec.dim(),
        samples,
        seed: spec.seed,
        terms_used: vec![terms; n],
        tail_diagnostic,
    }
}

/// Partial series θ^{1/α} Σ_{j: Γ_j/θ ≤ horizon} Γ_j^{−1/α} V_j for one
/// sample stream.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialSeries {
    pub value: Vec<f64>,
    pub terms: usize,
    /// θ^{1/α} Σ Γ_j^{−1/α} |V_j|, the conditioning scale of the sum.
    pub abs_scale: f64,
}

pub fn partial_series(spec: &ShotNoiseSpec, index: u64, horizon: f64) -> PartialSeries {
    let decay = Decay::new(spec.alpha);
    let mut stream = JumpStream::new(spec, index);
    let mut acc = vec![0.0; spec.dim()];
    let mut abs = 0.0;
    let mut terms = 0;
    loop {
        let (g, k) = stream.next_jump();
        if g / spec.theta > horizon {
            break;
        }
        let w = decay.apply(g);
        let x = &spec.jump_law.points[k];
        for (a, c) in acc.iter_mut().zip(x) {
            *a += w * c;
        }
        abs += w * norm(x);
        terms += 1;
    }
    let scale = spec.theta.powf(1.0 / spec.alpha);
    PartialSeries {
        value: acc.into_iter().map(|a| scale * a).collect(),
        terms,
        abs_scale: scale * abs,
    }
}

/// One jump of a compound Poisson path.
#[derive(Debug, Clone, PartialEq)]
pub struct PathJump {
    pub time: f64,
    pub jump: Vec<f64>,
}

/// Compound Poisson path X_t = Σ_{τ_j ≤ t} V_j on [0, horizon].
#[derive(Debug, Clone, PartialEq)]
pub struct CpPath {
    pub horizon: f64,
    pub jumps: Vec<PathJump>,
}

impl CpPath {
    /// X_t.
    pub fn value_at(&self, t: f64) -> Vec<f64> {
        let dim = self.jumps.first().map_or(0, |j| j.jump.len());
        let mut x = vec![0.0; dim];
        for j in self.jumps.iter().take_while(|j| j.time <= t) {
            for (a, c) in x.iter_mut().zip(&j.jump) {
                *a += c;
            }
        }
        x
    }

    /// ∫_{(eps, T]} t^{−1/α} dX_t = Σ_{eps < τ_j ≤ T} τ_j^{−1/α} V_j.
    pub fn integral(&self, alpha: f64, eps: f64, upper: f64, dim: usize) -> (Vec<f64>, usize) {
        let decay = Decay::new(alpha);
        let mut acc = vec![0.0; dim];
        let mut count = 0;
        for j in &self.jumps {
            if j.time <= eps || j.time > upper {
                continue;
            }
            let w = decay.apply(j.time);
            for (a, c) in acc.iter_mut().zip(&j.jump) {
                *a += w * c;
            }
            count += 1;
        }
        (acc, count)
    }
}

/// Simulate the compound Poisson path of sample `index` up to `horizon`.
pub fn cp_path(spec: &ShotNoiseSpec, index: u64, horizon: f64) -> CpPath {
    let mut stream = JumpStream::new(spec, index);
    let mut jumps = Vec::new();
    loop {
        let (g, k) = stream.next_jump();
        let time = g / spec.theta;
        if time > horizon {
            break;
        }
        jumps.push(PathJump {
            time,
            jump: spec.jump_law.points[k].clone(),
        });
    }
    CpPath { horizon, jumps }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CpBatch {
    pub batch: SampleBatch,
    pub paths: Vec<CpPath>,
}

/// `n` samples of ∫_{(eps,T]} t^{−1/α} dX_t over explicitly simulated paths.
pub fn sample_cp_integral(
    spec: &ShotNoiseSpec,
    eps: f64,
    horizon: f64,
    n: usize,
) -> Result<CpBatch> {
    if !(eps >= 0.0 && eps < horizon && horizon.is_finite()) {
        return invalid(format!("need 0 <= eps < T, got eps = {eps}, T = {horizon}"));
    }
    let dim = spec.dim();
    let results: Vec<(CpPath, Vec<f64>, usize)> = (0..n as u64)
        .into_par_iter()
        .map(|i| {
            let path = cp_path(spec, i, horizon);
            let (value, count) = path.integral(spec.alpha, eps, horizon, dim);
            (path, value, count)
        })
        .collect();
    let mut samples = Vec::with_capacity(n * dim);
    let mut terms_used = Vec::with_capacity(n);
    let mut paths = Vec::with_capacity(n);
    for (path, value, count) in results {
        samples.extend_from_slice(&value);
        terms_used.push(count);
        paths.push(path);
    }
    Ok(CpBatch {
        batch: SampleBatch {
            dim,
            samples,
            seed: spec.seed,
            terms_used,
            tail_diagnostic: vec![0.0; n],
        },
        paths,
    })
}

/// Centering constant a of the series: (α/(1−α)) E[(V/|V|)|V|^α] for α ≠ 1,
/// −E[V log|V|] for α = 1 (zero-mean jumps).
pub fn centering_constant(alpha: f64, law: &JumpLaw) -> Result<Vec<f64>> {
    if !(alpha > 0.0 && alpha < 2.0) {
        return invalid(format!("alpha = {alpha} outside (0,2)"));
    }
    if alpha >= 1.0 {
        let m = norm(&law.mean());
        if m > DEFAULT_TOL * law.abs_moment(1.0).max(1.0) {
            return Err(Error::Domain(format!("jump mean has norm {m}, expected 0")));
        }
    }
    let mut out = vec![0.0; law.dim];
    for (x, p) in law.points.iter().zip(&law.probs) {
        let r = norm(x);
        let factor = if alpha == 1.0 {
            -p * r.ln()
        } else {
            alpha / (1.0 - alpha) * p * r.powf(alpha - 1.0)
        };
        for (o, c) in out.iter_mut().zip(x) {
            *o += factor * c;
        }
    }
    Ok(out)
}
