//! Membership in the domain of μ ↦ L(∫₀^∞ t^{−1/α} dX_t^{(μ)}) and of its
//! square.

use std::fmt;

use crate::error::{invalid, Result};
use crate::levy::{
    convert_centering, levy_moments, Centering, LevyMeasure, Radial, Triplet, DEFAULT_TOL,
};
use crate::linalg::norm;
use crate::pushforward::pushforward_triplet;

/// Stable identifiers of the individual domain conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConditionId {
    AlphaMoment,
    DriftZero,
    MeanZero,
    ZeroMeanLevy,
    XlogLimits,
}

impl ConditionId {
    pub fn as_str(self) -> &'static str {
        match self {
            ConditionId::AlphaMoment => "alpha-moment",
            ConditionId::DriftZero => "drift-zero",
            ConditionId::MeanZero => "mean-zero",
            ConditionId::ZeroMeanLevy => "zero-mean-levy",
            ConditionId::XlogLimits => "xlog-limits",
        }
    }
}

impl fmt::Display for ConditionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Condition {
    pub id: ConditionId,
    pub passed: bool,
    /// The computed quantity (moment, norm of a residual); +∞ when divergent.
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DomainReport {
    pub alpha: f64,
    pub member: bool,
    pub conditions: Vec<Condition>,
    /// ∫ x log|x| ν(dx) for α = 1: the finite-measure value of both
    /// ε- and T-limits, and (negated) the shift of the image law.
    pub xlog: Option<Vec<f64>>,
}

impl DomainReport {
    pub fn condition(&self, id: ConditionId) -> Option<&Condition> {
        self.conditions.iter().find(|c| c.id == id)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Condition> {
        self.conditions.iter().filter(|c| !c.passed)
    }
}

/// ∫ |x|^α ν(dx). For a power-law radial part r^{−β−1}dr the integral
/// ∫₀¹ r^{α−β−1}dr needs α > β while ∫₁^∞ needs α < β, so it is +∞.
pub fn alpha_moment(nu: &LevyMeasure, alpha: f64) -> f64 {
    match nu {
        LevyMeasure::Atomic(m) => levy_moments(m, alpha).alpha_moment,
        LevyMeasure::Polar(p) => p
            .components()
            .iter()
            .map(|c| match &c.radial {
                Radial::Atoms(rs) => {
                    c.weight * rs.iter().map(|(r, q)| q * r.powf(alpha)).sum::<f64>()
                }
                Radial::PowerLaw { .. } => f64::INFINITY,
            })
            .sum(),
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 2.0) {
        return invalid(format!("alpha = {alpha} outside (0,2)"));
    }
    Ok(())
}

fn gamma_norm(t: &Triplet, flavor: Centering) -> f64 {
    convert_centering(t, flavor)
        .map(|c| norm(c.gamma()))
        .unwrap_or(f64::INFINITY)
}

/// Decide μ ∈ D(Ξ_α) for α < 1, α = 1 and α > 1.
pub fn in_domain(alpha: f64, t: &Triplet) -> Result<DomainReport> {
    in_domain_with_tol(alpha, t, DEFAULT_TOL)
}

pub fn in_domain_with_tol(alpha: f64, t: &Triplet, tol: f64) -> Result<DomainReport> {
    check_alpha(alpha)?;
    let nu = t.nu();
    let atomic = t.atomic_measure();
    // zero checks are relative to Σ m|x| (at least 1 for the γ terms)
    let scale = atomic
        .as_ref()
        .map_or(f64::INFINITY, |m| m.abs_first_moment());
    let gamma_tol = tol * scale.max(1.0);

    let moment = alpha_moment(nu, alpha);
    let mut conditions = vec![Condition {
        id: ConditionId::AlphaMoment,
        passed: moment.is_finite(),
        value: moment,
    }];
    let mut xlog = None;

    if alpha < 1.0 {
        let g = gamma_norm(t, Centering::Drift);
        conditions.push(Condition {
            id: ConditionId::DriftZero,
            passed: g <= gamma_tol,
            value: g,
        });
    } else if alpha > 1.0 {
        let g = gamma_norm(t, Centering::Mean);
        conditions.push(Condition {
            id: ConditionId::MeanZero,
            passed: g <= gamma_tol,
            value: g,
        });
    } else {
        let mean = atomic.as_ref().map_or(f64::INFINITY, |m| norm(&m.mean()));
        conditions.push(Condition {
            id: ConditionId::ZeroMeanLevy,
            passed: mean <= tol * scale,
            value: mean,
        });
        let g = gamma_norm(t, Centering::Drift);
        conditions.push(Condition {
            id: ConditionId::DriftZero,
            passed: g <= gamma_tol,
            value: g,
        });
        // For finite ν both limits exist and equal ∫_{|x|≤1} x log|x| ν and
        // ∫_{|x|>1} x log|x| ν.
        match &atomic {
            Some(m) => {
                let x = levy_moments(m, 1.0).xlog;
                conditions.push(Condition {
                    id: ConditionId::XlogLimits,
                    passed: true,
                    value: norm(&x),
                });
                xlog = Some(x);
            }
            None => conditions.push(Condition {
                id: ConditionId::XlogLimits,
                passed: false,
                value: f64::INFINITY,
            }),
        }
    }

    Ok(DomainReport {
        alpha,
        member: conditions.iter().all(|c| c.passed),
        conditions,
        xlog,
    })
}

/// Outcome of testing μ ∈ D(Ξ_α²).
#[derive(Debug, Clone, PartialEq)]
pub struct IteratedReport {
    pub member: bool,
    pub first: DomainReport,
    /// Domain report of the image triplet, when μ ∈ D(Ξ_α).
    pub second: Option<DomainReport>,
}

impl IteratedReport {
    /// α-moment of the image Lévy measure, if it was computed.
    pub fn image_alpha_moment(&self) -> Option<f64> {
        self.second
            .as_ref()
            .and_then(|r| r.condition(ConditionId::AlphaMoment))
            .map(|c| c.value)
    }
}

/// μ ∈ D(Ξ_α²) iff μ ∈ D(Ξ_α) and Ξ_α(μ) ∈ D(Ξ_α). The image measure is
/// computed and run through the gate again; its power-law radial parts
/// make the α-moment diverge unless ν = 0.
pub fn in_domain_iterated(alpha: f64, t: &Triplet) -> Result<IteratedReport> {
    let first = in_domain(alpha, t)?;
    if !first.member {
        return Ok(IteratedReport {
            member: false,
            first,
            second: None,
        });
    }
    let image = pushforward_triplet(alpha, t)?;
    let second = in_domain(alpha, &image)?;
    Ok(IteratedReport {
        member: second.member,
        first,
        second: Some(second),
    })
}
