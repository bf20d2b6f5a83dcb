//! Symbolic image of a triplet under μ ↦ L(∫₀^∞ t^{−1/α} dX_t^{(μ)}) and
//! constructive preimages of strictly stable laws.
//!
//! For a finite atomic ν in the domain, the image has Lévy measure
//! Σ_ξ λ(ξ) r^{−α−1} dr along each direction ξ, where
//!
//! ```text
//! λ(ξ) = α Σ_{x_k/|x_k| = ξ} m_k |x_k|^α
//! ```
//!
//! and its spectral measure is λ₁ = C_α λ with C_α = |Γ(−α) cos(πα/2)| for
//! α ≠ 1 and C_1 = π/2. For α = 1 the image shift is
//! τ = −Σ_k m_k x_k log|x_k|.

use std::f64::consts::PI;

use crate::domain::in_domain;
use crate::error::{invalid, Error, Result};
use crate::levy::{
    is_strictly_stable, Atom, AtomicMeasure, Centering, LevyMeasure, PolarMeasure,
    SphericalMeasure, StableLaw, Triplet, UnitVector, DEFAULT_TOL, DIRECTION_SNAP,
};
use crate::linalg::{min_norm_solve, norm};
use crate::special::gamma_neg;

/// Spectral weights below this are dropped after aggregation.
pub const WEIGHT_FLOOR: f64 = 1e-15;

/// Residual tolerance for writing a shift as a combination of directions,
/// relative to 1 + |τ|.
pub const SPAN_TOL: f64 = 1e-9;

/// The factor between the spherical part λ of the image Lévy measure and
/// the spectral measure λ₁ of the image law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralConstant {
    pub alpha: f64,
    pub value: f64,
}

/// |Γ(−α) cos(πα/2)| for α ≠ 1, π/2 for α = 1.
pub fn spectral_constant(alpha: f64) -> SpectralConstant {
    let value = if alpha == 1.0 {
        PI / 2.0
    } else {
        (gamma_neg(alpha) * (PI * alpha / 2.0).cos()).abs()
    };
    SpectralConstant { alpha, value }
}

/// One summand of τ = −Σ m x log|x| (α = 1 only).
#[derive(Debug, Clone, PartialEq)]
pub struct TauTerm {
    pub point: Vec<f64>,
    pub mass: f64,
    pub contribution: Vec<f64>,
}

/// How a push-forward law was obtained.
#[derive(Debug, Clone, PartialEq)]
pub struct PushforwardCertificate {
    pub alpha: f64,
    /// Spherical part λ of the image Lévy measure.
    pub lambda: SphericalMeasure,
    pub constant: SpectralConstant,
    pub tau_terms: Vec<TauTerm>,
}

fn require_domain(alpha: f64, t: &Triplet) -> Result<AtomicMeasure> {
    let report = in_domain(alpha, t)?;
    if !report.member {
        let failed: Vec<String> = report
            .failures()
            .map(|c| format!("{} (value {})", c.id, c.value))
            .collect();
        return Err(Error::Domain(failed.join(", ")));
    }
    t.atomic_measure()
        .ok_or_else(|| Error::Domain("Lévy measure is not finite atomic".into()))
}

/// λ(ξ) = α Σ m|x|^α over atoms with direction ξ.
pub fn spherical_part(alpha: f64, nu: &AtomicMeasure) -> SphericalMeasure {
    SphericalMeasure::aggregate(
        nu.dim(),
        nu.atoms().iter().map(|a| {
            let xi = UnitVector::normalize(&a.point).expect("atoms are nonzero");
            (xi, alpha * a.mass * norm(&a.point).powf(alpha))
        }),
        DIRECTION_SNAP,
        WEIGHT_FLOOR,
    )
}

/// The stable law Ξ_α(μ).
pub fn pushforward_law(alpha: f64, t: &Triplet) -> Result<StableLaw> {
    pushforward_with_certificate(alpha, t).map(|(law, _)| law)
}

pub fn pushforward_with_certificate(
    alpha: f64,
    t: &Triplet,
) -> Result<(StableLaw, PushforwardCertificate)> {
    let nu = require_domain(alpha, t)?;
    let lambda = spherical_part(alpha, &nu);
    let constant = spectral_constant(alpha);
    let spectral = SphericalMeasure::aggregate(
        nu.dim(),
        lambda
            .atoms()
            .iter()
            .map(|(xi, w)| (xi.clone(), constant.value * w)),
        DIRECTION_SNAP,
        WEIGHT_FLOOR,
    );
    let mut tau = vec![0.0; nu.dim()];
    let mut tau_terms = Vec::new();
    if alpha == 1.0 {
        for a in nu.atoms() {
            let l = norm(&a.point).ln();
            let contribution: Vec<f64> = a.point.iter().map(|x| -a.mass * x * l).collect();
            for (t, c) in tau.iter_mut().zip(&contribution) {
                *t += c;
            }
            tau_terms.push(TauTerm {
                point: a.point.clone(),
                mass: a.mass,
                contribution,
            });
        }
    }
    let law = StableLaw::new(alpha, spectral, tau)?;
    Ok((
        law,
        PushforwardCertificate {
            alpha,
            lambda,
            constant,
            tau_terms,
        },
    ))
}

/// The image triplet: power-law Lévy measure with spherical part λ and
/// raw γ̃ in closed form.
///
/// For α ≠ 1 the image has zero drift (α < 1) or zero mean (α > 1); both
/// give γ̃ = Σ_ξ λ(ξ) ξ / (1 − α). For α = 1 the raw γ̃ is the shift τ.
pub fn pushforward_triplet(alpha: f64, t: &Triplet) -> Result<Triplet> {
    let nu = require_domain(alpha, t)?;
    let lambda = spherical_part(alpha, &nu);
    let gamma = if alpha == 1.0 {
        pushforward_law(alpha, t)?.tau().to_vec()
    } else {
        lambda.mean().iter().map(|m| m / (1.0 - alpha)).collect()
    };
    Triplet::new(
        LevyMeasure::Polar(PolarMeasure::power_law(&lambda, alpha)?),
        gamma,
        Centering::Raw,
    )
}

/// Compound Poisson preimage on the sphere of a strictly stable law, α ≠ 1:
/// ν = (α C_α)^{−1} λ₁ with zero drift (α < 1) or zero mean (α > 1).
pub fn preimage(alpha: f64, s: &StableLaw) -> Result<Triplet> {
    if alpha == 1.0 {
        return invalid("alpha = 1 needs preimage_unit");
    }
    if s.alpha() != alpha {
        return invalid(format!("law has alpha {}, requested {alpha}", s.alpha()));
    }
    if !is_strictly_stable(s) {
        return Err(Error::NotStrict(format!("tau = {:?} is not zero", s.tau())));
    }
    let factor = 1.0 / (alpha * spectral_constant(alpha).value);
    let atoms = s
        .spectral()
        .atoms()
        .iter()
        .map(|(xi, w)| Atom::new(xi.coords().to_vec(), factor * w))
        .collect();
    let flavor = if alpha < 1.0 {
        Centering::Drift
    } else {
        Centering::Mean
    };
    Triplet::atomic(
        AtomicMeasure::new(s.dim(), atoms)?,
        vec![0.0; s.dim()],
        flavor,
    )
}

/// Minimum-norm f with Σ_i ξ_i f_i w_i = τ.
pub fn solve_shift(tau: &[f64], lambda: &SphericalMeasure) -> Result<Vec<f64>> {
    if tau.len() != lambda.dim() {
        return Err(Error::Dimension {
            expected: lambda.dim(),
            got: tau.len(),
        });
    }
    let columns: Vec<Vec<f64>> = lambda
        .atoms()
        .iter()
        .map(|(xi, w)| xi.coords().iter().map(|x| x * w).collect())
        .collect();
    let sol = min_norm_solve(&columns, tau);
    if sol.residual > SPAN_TOL * (1.0 + norm(tau)) {
        return Err(Error::ShiftOutsideSpan {
            residual: sol.residual,
        });
    }
    Ok(sol.coefficients)
}

/// Compound Poisson preimage of a strictly 1-stable law whose shift lies in
/// the span of the spectral support.
///
/// With λ = (2/π)λ₁, f from [`solve_shift`] and g = e^{−f}, the measure
/// ν = Σ_i (w_i / g_i) δ_{g_i ξ_i} has zero mean and maps to λ₁ with shift
/// −Σ_i w_i ξ_i log g_i = τ.
pub fn preimage_unit(s: &StableLaw) -> Result<Triplet> {
    if s.alpha() != 1.0 {
        return invalid(format!("preimage_unit needs alpha = 1, got {}", s.alpha()));
    }
    if !is_strictly_stable(s) {
        return Err(Error::NotStrict(format!(
            "spectral mean {:?} is not zero",
            s.spectral().mean()
        )));
    }
    let lambda = s.spectral().scaled(2.0 / PI)?;
    let f = solve_shift(s.tau(), &lambda)?;
    let atoms = lambda
        .atoms()
        .iter()
        .zip(&f)
        .map(|((xi, w), fi)| {
            let g = (-fi).exp();
            Atom::new(xi.coords().iter().map(|x| g * x).collect(), w / g)
        })
        .collect();
    let t = Triplet::atomic(
        AtomicMeasure::new(s.dim(), atoms)?,
        vec![0.0; s.dim()],
        Centering::Drift,
    )?;
    require_domain(1.0, &t)?;
    Ok(t)
}

/// Two different triplets with the same image under Ξ₁.
#[derive(Debug, Clone, PartialEq)]
pub struct NonInjectivePair {
    /// Polar parts (λ̃, δ₁).
    pub first: Triplet,
    /// Polar parts (λ̃, ½δ₂).
    pub second: Triplet,
    pub first_law: StableLaw,
    pub second_law: StableLaw,
}

/// Witness that Ξ₁ is not injective: ν₁ = Σ w_i δ_{ξ_i} and
/// ν₂ = Σ (w_i/2) δ_{2ξ_i}, both with zero drift.
pub fn noninjective_pair(lambda_tilde: &SphericalMeasure) -> Result<NonInjectivePair> {
    let mean = norm(&lambda_tilde.mean());
    if mean > DEFAULT_TOL * lambda_tilde.total().max(1.0) {
        return invalid(format!("spherical mean has norm {mean}, expected 0"));
    }
    let dim = lambda_tilde.dim();
    let build = |radius: f64, share: f64| -> Result<Triplet> {
        let atoms = lambda_tilde
            .atoms()
            .iter()
            .map(|(xi, w)| Atom::new(xi.coords().iter().map(|x| radius * x).collect(), share * w))
            .collect();
        Triplet::atomic(
            AtomicMeasure::new(dim, atoms)?,
            vec![0.0; dim],
            Centering::Drift,
        )
    };
    let first = build(1.0, 1.0)?;
    let second = build(2.0, 0.5)?;
    let first_law = pushforward_law(1.0, &first)?;
    let second_law = pushforward_law(1.0, &second)?;
    Ok(NonInjectivePair {
        first,
        second,
        first_law,
        second_law,
    })
}
