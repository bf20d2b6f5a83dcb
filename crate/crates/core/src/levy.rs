//! Lévy–Khintchine triplets without Gaussian part, their centerings, polar
//! decomposition of finite Lévy measures, and characteristic functions of
//! infinitely divisible and stable laws.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::linalg::{dot, norm};

/// Default tolerance for symbolic comparisons.
pub const DEFAULT_TOL: f64 = 1e-12;

/// Directions closer than this (max-abs coordinate difference) are merged.
pub const DIRECTION_SNAP: f64 = 1e-12;

/// A point on the unit sphere S ⊂ R^d.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitVector(Vec<f64>);

impl UnitVector {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return invalid("unit vector needs dimension >= 1");
        }
        let n = norm(&coords);
        if !n.is_finite() || (n - 1.0).abs() > DEFAULT_TOL {
            return invalid(format!("|{coords:?}| = {n}, expected 1"));
        }
        Ok(UnitVector(coords))
    }

    /// x / |x| for nonzero x.
    pub fn normalize(x: &[f64]) -> Result<Self> {
        let n = norm(x);
        if x.is_empty() || n == 0.0 || !n.is_finite() {
            return invalid(format!("cannot normalize {x:?}"));
        }
        Ok(UnitVector(x.iter().map(|c| c / n).collect()))
    }

    /// The k-th coordinate axis in R^d.
    pub fn axis(dim: usize, k: usize) -> Self {
        let mut v = vec![0.0; dim];
        v[k] = 1.0;
        UnitVector(v)
    }

    /// Unit vector at `angle` radians in the plane.
    pub fn planar(angle: f64) -> Self {
        UnitVector(vec![angle.cos(), angle.sin()])
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    fn close_to(&self, other: &[f64], snap: f64) -> bool {
        self.0.iter().zip(other).all(|(a, b)| (a - b).abs() <= snap)
    }
}

/// One atom of a finite Lévy measure.
#[derive(Debug, Clone, PartialEq)]
pub struct Atom {
    pub point: Vec<f64>,
    pub mass: f64,
}

impl Atom {
    pub fn new(point: Vec<f64>, mass: f64) -> Self {
        Atom { point, mass }
    }
}

/// Finite atomic measure on R^d \ {0}.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomicMeasure {
    dim: usize,
    atoms: Vec<Atom>,
}

impl AtomicMeasure {
    pub fn new(dim: usize, atoms: Vec<Atom>) -> Result<Self> {
        if dim == 0 {
            return invalid("dimension must be >= 1");
        }
        for (k, a) in atoms.iter().enumerate() {
            if a.point.len() != dim {
                return Err(Error::Dimension {
                    expected: dim,
                    got: a.point.len(),
                });
            }
            if a.point.iter().any(|c| !c.is_finite()) {
                return invalid(format!("atom {k} has a non-finite coordinate"));
            }
            if a.point.iter().all(|&c| c == 0.0) {
                return invalid(format!("atom {k} sits at the origin"));
            }
            if !(a.mass > 0.0 && a.mass.is_finite()) {
                return invalid(format!("atom {k} has mass {}, expected > 0", a.mass));
            }
        }
        Ok(AtomicMeasure { dim, atoms })
    }

    pub fn zero(dim: usize) -> Self {
        AtomicMeasure {
            dim,
            atoms: Vec::new(),
        }
    }

    /// Convenience constructor for d = 1: `(position, mass)` pairs.
    pub fn on_line(atoms: &[(f64, f64)]) -> Result<Self> {
        AtomicMeasure::new(
            1,
            atoms.iter().map(|&(x, m)| Atom::new(vec![x], m)).collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn is_zero(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.mass).sum()
    }

    /// Σ m |x|, the scale used for zero-mean tolerances.
    pub fn abs_first_moment(&self) -> f64 {
        self.atoms.iter().map(|a| a.mass * norm(&a.point)).sum()
    }

    pub fn scaled(&self, c: f64) -> Result<Self> {
        AtomicMeasure::new(
            self.dim,
            self.atoms
                .iter()
                .map(|a| Atom::new(a.point.clone(), a.mass * c))
                .collect(),
        )
    }

    fn weighted_sum(&self, keep: impl Fn(f64) -> bool) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        for a in &self.atoms {
            if keep(norm(&a.point)) {
                for (o, x) in out.iter_mut().zip(&a.point) {
                    *o += a.mass * x;
                }
            }
        }
        out
    }

    /// ∫_{|x|≤1} x ν(dx).
    pub fn small_jump_mean(&self) -> Vec<f64> {
        self.weighted_sum(|r| r <= 1.0)
    }

    /// ∫_{|x|>1} x ν(dx).
    pub fn big_jump_mean(&self) -> Vec<f64> {
        self.weighted_sum(|r| r > 1.0)
    }

    /// ∫ x ν(dx).
    pub fn mean(&self) -> Vec<f64> {
        self.weighted_sum(|_| true)
    }
}

/// Radial component of a polar measure along one direction.
#[derive(Debug, Clone, PartialEq)]
pub enum Radial {
    /// Point masses `(r, p)`; a probability measure when produced by
    /// [`polar_decompose`].
    Atoms(Vec<(f64, f64)>),
    /// Density r^{−α−1} dr on (0, ∞).
    PowerLaw { alpha: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolarComponent {
    pub direction: UnitVector,
    pub weight: f64,
    pub radial: Radial,
}

/// ν(B) = Σ_ξ weight_ξ ∫ 1_B(rξ) radial_ξ(dr).
#[derive(Debug, Clone, PartialEq)]
pub struct PolarMeasure {
    dim: usize,
    components: Vec<PolarComponent>,
}

impl PolarMeasure {
    pub fn new(dim: usize, components: Vec<PolarComponent>) -> Result<Self> {
        if dim == 0 {
            return invalid("dimension must be >= 1");
        }
        for c in &components {
            if c.direction.dim() != dim {
                return Err(Error::Dimension {
                    expected: dim,
                    got: c.direction.dim(),
                });
            }
            if !(c.weight > 0.0 && c.weight.is_finite()) {
                return invalid(format!("spherical weight {} must be > 0", c.weight));
            }
            match &c.radial {
                Radial::Atoms(rs) => {
                    if rs
                        .iter()
                        .any(|&(r, p)| !(r > 0.0 && p > 0.0) || !r.is_finite())
                    {
                        return invalid("radial atoms need r > 0 and p > 0");
                    }
                }
                Radial::PowerLaw { alpha } => {
                    if !(*alpha > 0.0 && *alpha < 2.0) {
                        return invalid(format!("power-law exponent {alpha} outside (0,2)"));
                    }
                }
            }
        }
        Ok(PolarMeasure { dim, components })
    }

    /// Power-law measure Σ_ξ λ(ξ) ∫ 1_B(rξ) r^{−α−1} dr.
    pub fn power_law(spherical: &SphericalMeasure, alpha: f64) -> Result<Self> {
        PolarMeasure::new(
            spherical.dim(),
            spherical
                .atoms()
                .iter()
                .map(|(xi, w)| PolarComponent {
                    direction: xi.clone(),
                    weight: *w,
                    radial: Radial::PowerLaw { alpha },
                })
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn components(&self) -> &[PolarComponent] {
        &self.components
    }

    pub fn has_power_law(&self) -> bool {
        self.components
            .iter()
            .any(|c| matches!(c.radial, Radial::PowerLaw { .. }))
    }

    /// Spherical part as a measure on S.
    pub fn spherical(&self) -> SphericalMeasure {
        SphericalMeasure {
            dim: self.dim,
            atoms: self
                .components
                .iter()
                .map(|c| (c.direction.clone(), c.weight))
                .collect(),
        }
    }

    /// Rebuild the atomic measure Σ_ξ Σ_r weight·p δ_{rξ}. Fails on
    /// power-law components.
    pub fn reconstruct(&self) -> Result<AtomicMeasure> {
        let mut atoms = Vec::new();
        for c in &self.components {
            match &c.radial {
                Radial::Atoms(rs) => {
                    for &(r, p) in rs {
                        let point = c.direction.coords().iter().map(|x| r * x).collect();
                        atoms.push(Atom::new(point, c.weight * p));
                    }
                }
                Radial::PowerLaw { .. } => {
                    return Err(Error::Unsupported(
                        "power-law radial part has no atomic form".into(),
                    ))
                }
            }
        }
        AtomicMeasure::new(self.dim, atoms)
    }
}

/// Finite discrete measure on the unit sphere (spherical parts, spectral
/// measures).
#[derive(Debug, Clone, PartialEq)]
pub struct SphericalMeasure {
    dim: usize,
    atoms: Vec<(UnitVector, f64)>,
}

impl SphericalMeasure {
    pub fn new(dim: usize, atoms: Vec<(UnitVector, f64)>) -> Result<Self> {
        if dim == 0 {
            return invalid("dimension must be >= 1");
        }
        for (xi, w) in &atoms {
            if xi.dim() != dim {
                return Err(Error::Dimension {
                    expected: dim,
                    got: xi.dim(),
                });
            }
            if !(*w > 0.0 && w.is_finite()) {
                return invalid(format!("spherical weight {w} must be > 0"));
            }
        }
        Ok(SphericalMeasure { dim, atoms })
    }

    pub fn empty(dim: usize) -> Self {
        SphericalMeasure {
            dim,
            atoms: Vec::new(),
        }
    }

    /// d = 1 shorthand: `(sign, weight)` with sign ±1.
    pub fn on_line(atoms: &[(f64, f64)]) -> Result<Self> {
        let atoms = atoms
            .iter()
            .map(|&(s, w)| Ok((UnitVector::new(vec![s])?, w)))
            .collect::<Result<Vec<_>>>()?;
        SphericalMeasure::new(1, atoms)
    }

    /// Aggregate (direction, weight) pairs, merging directions within
    /// `snap` and dropping totals below `drop_below`.
    pub(crate) fn aggregate(
        dim: usize,
        items: impl IntoIterator<Item = (UnitVector, f64)>,
        snap: f64,
        drop_below: f64,
    ) -> Self {
        let mut atoms: Vec<(UnitVector, f64)> = Vec::new();
        for (xi, w) in items {
            match atoms
                .iter_mut()
                .find(|(d, _)| d.close_to(xi.coords(), snap))
            {
                Some(slot) => slot.1 += w,
                None => atoms.push((xi, w)),
            }
        }
        atoms.retain(|(_, w)| *w >= drop_below);
        SphericalMeasure { dim, atoms }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn atoms(&self) -> &[(UnitVector, f64)] {
        &self.atoms
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.atoms.iter().map(|(_, w)| w).sum()
    }

    /// ∫_S ξ λ(dξ).
    pub fn mean(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        for (xi, w) in &self.atoms {
            for (o, x) in out.iter_mut().zip(xi.coords()) {
                *o += w * x;
            }
        }
        out
    }

    pub fn scaled(&self, c: f64) -> Result<Self> {
        SphericalMeasure::new(
            self.dim,
            self.atoms
                .iter()
                .map(|(xi, w)| (xi.clone(), w * c))
                .collect(),
        )
    }

    /// Weight at `direction`, zero if absent.
    pub fn weight_at(&self, direction: &[f64]) -> f64 {
        self.atoms
            .iter()
            .filter(|(xi, _)| xi.close_to(direction, DIRECTION_SNAP))
            .map(|(_, w)| w)
            .sum()
    }
}

/// Lévy measure: finite atomic, or in polar form.
#[derive(Debug, Clone, PartialEq)]
pub enum LevyMeasure {
    Atomic(AtomicMeasure),
    Polar(PolarMeasure),
}

impl LevyMeasure {
    pub fn dim(&self) -> usize {
        match self {
            LevyMeasure::Atomic(m) => m.dim(),
            LevyMeasure::Polar(p) => p.dim(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            LevyMeasure::Atomic(m) => m.is_zero(),
            LevyMeasure::Polar(p) => p.components().is_empty(),
        }
    }

    /// Atomic form if the measure is finite and discrete.
    pub fn to_atomic(&self) -> Option<AtomicMeasure> {
        match self {
            LevyMeasure::Atomic(m) => Some(m.clone()),
            LevyMeasure::Polar(p) => p.reconstruct().ok(),
        }
    }

    /// ∫_{|x|≤1} x ν(dx), or `None` when ∫_{|x|≤1}|x| ν(dx) = ∞.
    pub fn small_jump_mean(&self) -> Option<Vec<f64>> {
        // ∫₀¹ r·r^{−β−1} dr = 1/(1−β) for β < 1
        self.first_moment_part(
            |r| r <= 1.0,
            |beta| (beta < 1.0).then(|| 1.0 / (1.0 - beta)),
        )
    }

    /// ∫_{|x|>1} x ν(dx), or `None` when ∫_{|x|>1}|x| ν(dx) = ∞.
    pub fn big_jump_mean(&self) -> Option<Vec<f64>> {
        // ∫₁^∞ r·r^{−β−1} dr = 1/(β−1) for β > 1
        self.first_moment_part(|r| r > 1.0, |beta| (beta > 1.0).then(|| 1.0 / (beta - 1.0)))
    }

    fn first_moment_part(
        &self,
        keep: impl Fn(f64) -> bool,
        power_law: impl Fn(f64) -> Option<f64>,
    ) -> Option<Vec<f64>> {
        match self {
            LevyMeasure::Atomic(m) => Some(m.weighted_sum(keep)),
            LevyMeasure::Polar(p) => {
                let mut out = vec![0.0; p.dim()];
                for c in p.components() {
                    let factor = match &c.radial {
                        Radial::PowerLaw { alpha } => c.weight * power_law(*alpha)?,
                        Radial::Atoms(rs) => rs
                            .iter()
                            .filter(|(r, _)| keep(*r))
                            .map(|(r, q)| c.weight * q * r)
                            .sum(),
                    };
                    for (o, x) in out.iter_mut().zip(c.direction.coords()) {
                        *o += factor * x;
                    }
                }
                Some(out)
            }
        }
    }
}

/// Which centering the γ vector of a triplet refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Centering {
    /// Truncation function 1_{|x|≤1}.
    Raw,
    /// No compensation: γ⁰.
    Drift,
    /// Full compensation: γ¹, the mean.
    Mean,
}

impl Centering {
    pub fn name(self) -> &'static str {
        match self {
            Centering::Raw => "raw",
            Centering::Drift => "drift",
            Centering::Mean => "mean",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "raw" => Some(Centering::Raw),
            "drift" => Some(Centering::Drift),
            "mean" => Some(Centering::Mean),
            _ => None,
        }
    }
}

/// Lévy–Khintchine data (0, ν, γ) with its centering.
#[derive(Debug, Clone, PartialEq)]
pub struct Triplet {
    nu: LevyMeasure,
    gamma: Vec<f64>,
    flavor: Centering,
}

impl Triplet {
    pub fn new(nu: LevyMeasure, gamma: Vec<f64>, flavor: Centering) -> Result<Self> {
        if gamma.len() != nu.dim() {
            return Err(Error::Dimension {
                expected: nu.dim(),
                got: gamma.len(),
            });
        }
        if gamma.iter().any(|g| !g.is_finite()) {
            return invalid("gamma must be finite");
        }
        match flavor {
            Centering::Drift if nu.small_jump_mean().is_none() => {
                return Err(Error::Inadmissible {
                    target: "drift",
                    reason: "∫_{|x|≤1}|x| ν(dx) is infinite".into(),
                })
            }
            Centering::Mean if nu.big_jump_mean().is_none() => {
                return Err(Error::Inadmissible {
                    target: "mean",
                    reason: "∫_{|x|>1}|x| ν(dx) is infinite".into(),
                })
            }
            _ => {}
        }
        Ok(Triplet { nu, gamma, flavor })
    }

    pub fn atomic(nu: AtomicMeasure, gamma: Vec<f64>, flavor: Centering) -> Result<Self> {
        Triplet::new(LevyMeasure::Atomic(nu), gamma, flavor)
    }

    /// The triplet of δ₀.
    pub fn delta_zero(dim: usize) -> Self {
        Triplet {
            nu: LevyMeasure::Atomic(AtomicMeasure::zero(dim)),
            gamma: vec![0.0; dim],
            flavor: Centering::Raw,
        }
    }

    pub fn nu(&self) -> &LevyMeasure {
        &self.nu
    }

    pub fn gamma(&self) -> &[f64] {
        &self.gamma
    }

    pub fn flavor(&self) -> Centering {
        self.flavor
    }

    pub fn dim(&self) -> usize {
        self.nu.dim()
    }

    /// Finite atomic Lévy measure, if that is what this triplet carries.
    pub fn atomic_measure(&self) -> Option<AtomicMeasure> {
        self.nu.to_atomic()
    }
}

/// Strictly or non-strictly α-stable law in spectral form.
#[derive(Debug, Clone, PartialEq)]
pub struct StableLaw {
    alpha: f64,
    spectral: SphericalMeasure,
    tau: Vec<f64>,
}

impl StableLaw {
    pub fn new(alpha: f64, spectral: SphericalMeasure, tau: Vec<f64>) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 2.0) {
            return invalid(format!("alpha = {alpha} outside (0,2)"));
        }
        if tau.len() != spectral.dim() {
            return Err(Error::Dimension {
                expected: spectral.dim(),
                got: tau.len(),
            });
        }
        if tau.iter().any(|t| !t.is_finite()) {
            return invalid("tau must be finite");
        }
        Ok(StableLaw {
            alpha,
            spectral,
            tau,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn spectral(&self) -> &SphericalMeasure {
        &self.spectral
    }

    pub fn tau(&self) -> &[f64] {
        &self.tau
    }

    pub fn dim(&self) -> usize {
        self.spectral.dim()
    }

    pub fn is_point_mass(&self) -> bool {
        self.spectral.is_empty()
    }
}

fn check_dim(expected: usize, z: &[f64]) -> Result<()> {
    if z.len() != expected {
        return Err(Error::Dimension {
            expected,
            got: z.len(),
        });
    }
    Ok(())
}

/// Characteristic function of μ_{(0,ν,γ)} under the triplet's centering.
pub fn cf_infdiv(t: &Triplet, z: &[f64]) -> Result<Complex64> {
    check_dim(t.dim(), z)?;
    let nu = t.atomic_measure().ok_or_else(|| {
        Error::Unsupported(
            "characteristic function of a power-law Lévy measure; use cf_stable on the push-forward law"
                .into(),
        )
    })?;
    let mut exponent = Complex64::new(0.0, dot(&t.gamma, z));
    for a in nu.atoms() {
        let u = dot(&a.point, z);
        let compensator = match t.flavor {
            Centering::Drift => 0.0,
            Centering::Mean => u,
            Centering::Raw if norm(&a.point) <= 1.0 => u,
            Centering::Raw => 0.0,
        };
        exponent += a.mass * Complex64::new(u.cos() - 1.0, u.sin() - compensator);
    }
    Ok(exponent.exp())
}

/// Characteristic function of a stable law in spectral form.
pub fn cf_stable(s: &StableLaw, z: &[f64]) -> Result<Complex64> {
    check_dim(s.dim(), z)?;
    let alpha = s.alpha;
    let mut exponent = Complex64::new(0.0, dot(&s.tau, z));
    if alpha == 1.0 {
        for (xi, w) in s.spectral.atoms() {
            let u = dot(xi.coords(), z);
            let ulog = if u == 0.0 { 0.0 } else { u * u.abs().ln() };
            exponent -= w * Complex64::new(u.abs(), 2.0 / PI * ulog);
        }
    } else {
        let skew = (PI * alpha / 2.0).tan();
        for (xi, w) in s.spectral.atoms() {
            let u = dot(xi.coords(), z);
            let sign = if u > 0.0 {
                1.0
            } else if u < 0.0 {
                -1.0
            } else {
                0.0
            };
            exponent -= w * u.abs().powf(alpha) * Complex64::new(1.0, -skew * sign);
        }
    }
    Ok(exponent.exp())
}

/// Re-express `t` with another centering.
pub fn convert_centering(t: &Triplet, target: Centering) -> Result<Triplet> {
    if t.flavor == target {
        return Ok(t.clone());
    }
    let inadmissible = |target: Centering, what: &str| Error::Inadmissible {
        target: target.name(),
        reason: format!("{what} first moment of ν is infinite"),
    };
    // γ = γ⁰ + ∫_{|x|≤1} xν = γ¹ − ∫_{|x|>1} xν
    let raw: Vec<f64> = match t.flavor {
        Centering::Raw => t.gamma.clone(),
        Centering::Drift => {
            let small =
                t.nu.small_jump_mean()
                    .ok_or_else(|| inadmissible(Centering::Drift, "small-jump"))?;
            t.gamma.iter().zip(small).map(|(g, s)| g + s).collect()
        }
        Centering::Mean => {
            let big =
                t.nu.big_jump_mean()
                    .ok_or_else(|| inadmissible(Centering::Mean, "big-jump"))?;
            t.gamma.iter().zip(big).map(|(g, b)| g - b).collect()
        }
    };
    let gamma = match target {
        Centering::Raw => raw,
        Centering::Drift => {
            let small =
                t.nu.small_jump_mean()
                    .ok_or_else(|| inadmissible(target, "small-jump"))?;
            raw.iter().zip(small).map(|(g, s)| g - s).collect()
        }
        Centering::Mean => {
            let big =
                t.nu.big_jump_mean()
                    .ok_or_else(|| inadmissible(target, "big-jump"))?;
            raw.iter().zip(big).map(|(g, b)| g + b).collect()
        }
    };
    Ok(Triplet {
        nu: t.nu.clone(),
        gamma,
        flavor: target,
    })
}

/// μ_{(0,ν,0)₀} = μ_{(0,ν,0)₁}: finite first moment, ∫xν = 0 and the raw
/// γ equals ∫_{|x|≤1} xν.
pub fn drift_mean_coincide(t: &Triplet) -> bool {
    drift_mean_coincide_with_tol(t, DEFAULT_TOL)
}

pub fn drift_mean_coincide_with_tol(t: &Triplet, tol: f64) -> bool {
    let Some(nu) = t.atomic_measure() else {
        // power-law measures have infinite first moment
        return t.nu.is_zero() && norm(&t.gamma) == 0.0;
    };
    let Ok(raw) = convert_centering(t, Centering::Raw) else {
        return false;
    };
    let scale = nu.abs_first_moment();
    let mean_zero = norm(&nu.mean()) <= tol * scale;
    let small = nu.small_jump_mean();
    let diff: Vec<f64> = raw.gamma.iter().zip(&small).map(|(g, s)| g - s).collect();
    mean_zero && norm(&diff) <= tol * scale.max(1.0)
}

/// Polar decomposition of a finite atomic measure with probability radial
/// parts.
pub fn polar_decompose(nu: &AtomicMeasure) -> PolarMeasure {
    polar_decompose_with_snap(nu, DIRECTION_SNAP)
}

pub fn polar_decompose_with_snap(nu: &AtomicMeasure, snap: f64) -> PolarMeasure {
    let mut groups: Vec<(UnitVector, Vec<(f64, f64)>)> = Vec::new();
    for a in nu.atoms() {
        let r = norm(&a.point);
        let xi = UnitVector::normalize(&a.point).expect("atoms are nonzero");
        match groups
            .iter_mut()
            .find(|(d, _)| d.close_to(xi.coords(), snap))
        {
            Some((_, radial)) => radial.push((r, a.mass)),
            None => groups.push((xi, vec![(r, a.mass)])),
        }
    }
    let components = groups
        .into_iter()
        .map(|(direction, radial)| {
            let weight: f64 = radial.iter().map(|(_, m)| m).sum();
            PolarComponent {
                direction,
                weight,
                radial: Radial::Atoms(radial.into_iter().map(|(r, m)| (r, m / weight)).collect()),
            }
        })
        .collect();
    PolarMeasure {
        dim: nu.dim(),
        components,
    }
}

/// Moment functionals of a finite atomic measure.
#[derive(Debug, Clone, PartialEq)]
pub struct LevyMoments {
    /// ∫ |x|^α ν(dx)
    pub alpha_moment: f64,
    /// ∫ x ν(dx)
    pub mean: Vec<f64>,
    /// ∫ x log|x| ν(dx)
    pub xlog: Vec<f64>,
}

pub fn levy_moments(nu: &AtomicMeasure, alpha: f64) -> LevyMoments {
    let mut xlog = vec![0.0; nu.dim()];
    let mut alpha_moment = 0.0;
    for a in nu.atoms() {
        let r = norm(&a.point);
        alpha_moment += a.mass * r.powf(alpha);
        let l = r.ln();
        for (o, x) in xlog.iter_mut().zip(&a.point) {
            *o += a.mass * x * l;
        }
    }
    LevyMoments {
        alpha_moment,
        mean: nu.mean(),
        xlog,
    }
}

/// Strict stability: τ = 0 for α ≠ 1, ∫ξλ₁(dξ) = 0 for α = 1.
pub fn is_strictly_stable(s: &StableLaw) -> bool {
    is_strictly_stable_with_tol(s, DEFAULT_TOL)
}

pub fn is_strictly_stable_with_tol(s: &StableLaw, tol: f64) -> bool {
    if s.alpha == 1.0 {
        norm(&s.spectral.mean()) <= tol * s.spectral.total().max(1.0)
    } else {
        norm(&s.tau) <= tol
    }
}
