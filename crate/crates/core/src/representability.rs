//! Which strictly stable laws are images of compound Poisson laws?
//!
//! * α < 1: all of them.
//! * α = 1: exactly those whose shift τ lies in the span of the spectral
//!   support.
//! * α > 1: those for which some q > 0 on the support of λ₁ gives
//!   ∫ q(ξ) ξ λ₁(dξ) = 0. For a discrete λ₁ this is a linear feasibility
//!   question, decided here by maximizing the smallest weight.

use std::fmt;

use crate::error::{Error, Result};
use crate::levy::{
    is_strictly_stable, Atom, AtomicMeasure, Centering, SphericalMeasure, StableLaw, Triplet,
    UnitVector,
};
use crate::linalg::{min_norm_solve, norm};
use crate::pushforward::{preimage, preimage_unit, SPAN_TOL};
use crate::simplex::{maximize, LpOutcome};
use crate::special::gamma_neg;

/// Smallest admissible weight in a positive combination.
pub const POSITIVITY_TOL: f64 = 1e-10;

/// Largest |Σ p_i ξ_i| accepted when re-verifying a witness.
pub const WITNESS_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct SpanCheck {
    pub contains: bool,
    /// Minimum-norm coefficients c with Σ c_i ξ_i ≈ τ.
    pub coefficients: Vec<f64>,
    pub residual: f64,
}

/// Is τ in span{ξ_i : λ₁(ξ_i) > 0}? The empty support spans {0}.
pub fn span_contains(lambda1: &SphericalMeasure, tau: &[f64]) -> SpanCheck {
    let columns: Vec<Vec<f64>> = lambda1
        .atoms()
        .iter()
        .map(|(xi, _)| xi.coords().to_vec())
        .collect();
    let sol = min_norm_solve(&columns, tau);
    SpanCheck {
        contains: sol.residual <= SPAN_TOL * (1.0 + norm(tau)),
        coefficients: sol.coefficients,
        residual: sol.residual,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PositiveCombination {
    pub exists: bool,
    /// Probability vector p maximizing min p_i subject to Σ p_i ξ_i = 0;
    /// empty when the constraints are infeasible.
    pub p: Vec<f64>,
    /// q_i = p_i / w_i.
    pub q: Vec<f64>,
    /// The optimal min_i p_i, or −∞ when infeasible.
    pub min_component: f64,
    /// |Σ p_i ξ_i| at the returned p.
    pub residual: f64,
}

/// Decide whether Σ p_i ξ_i = 0 for some p_i > 0.
///
/// Solves max t over p_i = s_i + t, s ≥ 0, Σ p_i ξ_i = 0, Σ p_i = 1 with
/// t = t⁺ − t⁻.
pub fn positive_combination_exists(
    directions: &[UnitVector],
    weights: &[f64],
) -> PositiveCombination {
    let n = directions.len();
    assert_eq!(weights.len(), n, "one weight per direction");
    let none = PositiveCombination {
        exists: false,
        p: Vec::new(),
        q: Vec::new(),
        min_component: f64::NEG_INFINITY,
        residual: f64::INFINITY,
    };
    if n == 0 {
        return none;
    }
    let d = directions[0].dim();
    // columns: s_1..s_n, t⁺, t⁻
    let cols = n + 2;
    let mut a = Vec::with_capacity(d + 1);
    for k in 0..d {
        let mut row = vec![0.0; cols];
        let mut total = 0.0;
        for (i, xi) in directions.iter().enumerate() {
            row[i] = xi.coords()[k];
            total += xi.coords()[k];
        }
        row[n] = total;
        row[n + 1] = -total;
        a.push(row);
    }
    let mut row = vec![1.0; cols];
    row[n] = n as f64;
    row[n + 1] = -(n as f64);
    a.push(row);
    let mut b = vec![0.0; d];
    b.push(1.0);
    let mut c = vec![0.0; cols];
    c[n] = 1.0;
    c[n + 1] = -1.0;

    let LpOutcome::Optimal { x, value } = maximize(&c, &a, &b) else {
        return none;
    };
    let p: Vec<f64> = x[..n].iter().map(|s| s + value).collect();
    let q = p.iter().zip(weights).map(|(pi, w)| pi / w).collect();
    let residual = combination_residual(directions, &p);
    PositiveCombination {
        exists: value > POSITIVITY_TOL && residual <= WITNESS_TOL,
        p,
        q,
        min_component: value,
        residual,
    }
}

fn combination_residual(directions: &[UnitVector], p: &[f64]) -> f64 {
    let d = directions.first().map_or(0, |x| x.dim());
    let mut s = vec![0.0; d];
    for (xi, pi) in directions.iter().zip(p) {
        for (sk, x) in s.iter_mut().zip(xi.coords()) {
            *sk += pi * x;
        }
    }
    norm(&s)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlphaCase {
    Below1,
    Equal1,
    Above1,
}

impl AlphaCase {
    pub fn of(alpha: f64) -> Self {
        if alpha < 1.0 {
            AlphaCase::Below1
        } else if alpha == 1.0 {
            AlphaCase::Equal1
        } else {
            AlphaCase::Above1
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            AlphaCase::Below1 => "below1",
            AlphaCase::Equal1 => "equal1",
            AlphaCase::Above1 => "above1",
        }
    }
}

impl fmt::Display for AlphaCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RepCertificate {
    pub representable: bool,
    pub case: AlphaCase,
    /// Span coefficients (α = 1) or q-weights (α > 1); empty otherwise.
    pub witness: Vec<f64>,
    /// A compound Poisson triplet mapping to the law, when representable.
    pub preimage: Option<Triplet>,
}

/// ν = c Σ_i w_i q_i^{α/(α−1)} δ_{q_i^{1/(1−α)} ξ_i}, c = |αΓ(−α)cos(πα/2)|^{−1},
/// with zero mean.
pub fn weighted_preimage(s: &StableLaw, q: &[f64]) -> Result<Triplet> {
    let alpha = s.alpha();
    if alpha <= 1.0 {
        return Err(Error::Invalid(format!(
            "weighted preimage needs alpha > 1, got {alpha}"
        )));
    }
    if q.len() != s.spectral().atoms().len() || q.iter().any(|v| !(*v > 0.0)) {
        return Err(Error::Invalid(
            "q must be positive, one entry per spectral atom".into(),
        ));
    }
    let c = 1.0 / (alpha * gamma_neg(alpha) * (std::f64::consts::PI * alpha / 2.0).cos()).abs();
    let atoms = s
        .spectral()
        .atoms()
        .iter()
        .zip(q)
        .map(|((xi, w), qi)| {
            let r = qi.powf(1.0 / (1.0 - alpha));
            let mass = c * w * qi.powf(alpha / (alpha - 1.0));
            Atom::new(xi.coords().iter().map(|x| r * x).collect(), mass)
        })
        .collect();
    Triplet::atomic(
        AtomicMeasure::new(s.dim(), atoms)?,
        vec![0.0; s.dim()],
        Centering::Mean,
    )
}

/// Decide whether `s` is the image of a compound Poisson law and, if so,
/// produce one.
pub fn series_representable(s: &StableLaw) -> Result<RepCertificate> {
    if !is_strictly_stable(s) {
        return Err(Error::NotStrict(format!(
            "alpha = {}, tau = {:?}",
            s.alpha(),
            s.tau()
        )));
    }
    let case = AlphaCase::of(s.alpha());
    let cert = match case {
        AlphaCase::Below1 => RepCertificate {
            representable: true,
            case,
            witness: Vec::new(),
            preimage: Some(preimage(s.alpha(), s)?),
        },
        AlphaCase::Equal1 => {
            let span = span_contains(s.spectral(), s.tau());
            let preimage = if span.contains {
                Some(preimage_unit(s)?)
            } else {
                None
            };
            RepCertificate {
                representable: span.contains,
                case,
                witness: if span.contains {
                    span.coefficients
                } else {
                    Vec::new()
                },
                preimage,
            }
        }
        AlphaCase::Above1 => {
            let (dirs, weights): (Vec<UnitVector>, Vec<f64>) =
                s.spectral().atoms().iter().cloned().unzip();
            let comb = positive_combination_exists(&dirs, &weights);
            if comb.exists {
                RepCertificate {
                    representable: true,
                    case,
                    preimage: Some(weighted_preimage(s, &comb.q)?),
                    witness: comb.q,
                }
            } else {
                RepCertificate {
                    representable: false,
                    case,
                    witness: Vec::new(),
                    preimage: None,
                }
            }
        }
    };
    Ok(cert)
}
