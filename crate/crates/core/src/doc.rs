//! TOML documents for triplets, stable laws, sampler specs and reports.
//!
//! A triplet:
//!
//! ```toml
//! alpha = 0.5          # optional, used by commands that need one
//! flavor = "drift"     # raw | drift | mean
//! gamma = [0.0]
//!
//! [[atoms]]
//! point = [1.0]
//! mass = 1.0
//! ```
//!
//! A stable law lists `alpha`, `tau` and `[[spectral]]` entries with a
//! `direction` (normalized on input) and a `weight`. A sampler spec has
//! `alpha`, `theta` and `[[jumps]]` with `point` and `prob`, or instead a
//! Lévy measure under `[[atoms]]`; `seed`, `max_terms` and `tail_budget`
//! are optional.

use serde::{Deserialize, Serialize};

use crate::domain::{DomainReport, IteratedReport};
use crate::error::{Error, Result};
use crate::levy::{
    Atom, AtomicMeasure, Centering, LevyMeasure, PolarComponent, PolarMeasure, Radial,
    SphericalMeasure, StableLaw, Triplet, UnitVector,
};
use crate::pushforward::{NonInjectivePair, PushforwardCertificate};
use crate::representability::RepCertificate;
use crate::shotnoise::{JumpLaw, ShotNoiseSpec, Truncation, DEFAULT_SEED};

fn doc_err(field: impl AsRef<str>, e: impl std::fmt::Display) -> Error {
    Error::Document(format!("{}: {e}", field.as_ref()))
}

fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    toml::from_str(text).map_err(|e| Error::Document(e.to_string()))
}

fn render<T: Serialize>(value: &T) -> String {
    toml::to_string(value).expect("documents are plain tables")
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AtomDoc {
    point: Vec<f64>,
    mass: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PolarDoc {
    direction: Vec<f64>,
    weight: f64,
    /// Power-law radial part r^{−α−1} dr.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    power_law: Option<f64>,
    /// Radial atoms as [radius, probability] pairs.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    radii: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TripletDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    dim: Option<usize>,
    flavor: String,
    gamma: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    atoms: Vec<AtomDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    polar: Vec<PolarDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpectralDoc {
    direction: Vec<f64>,
    weight: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LawDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tau: Option<Vec<f64>>,
    #[serde(default)]
    spectral: Vec<SpectralDoc>,
    /// Present in `push` output; ignored on input.
    #[serde(default, skip_serializing, rename = "certificate")]
    _certificate: Option<toml::Table>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JumpDoc {
    point: Vec<f64>,
    prob: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecDoc {
    alpha: f64,
    #[serde(default)]
    theta: Option<f64>,
    #[serde(default)]
    jumps: Vec<JumpDoc>,
    #[serde(default)]
    atoms: Vec<AtomDoc>,
    #[serde(default)]
    seed: Option<u64>,
    #[serde(default)]
    max_terms: Option<usize>,
    #[serde(default)]
    tail_budget: Option<f64>,
}

fn infer_dim(explicit: Option<usize>, first: Option<usize>, what: &str) -> Result<usize> {
    match (explicit, first) {
        (Some(d), _) | (None, Some(d)) if d > 0 => Ok(d),
        _ => Err(doc_err(what, "cannot infer the dimension; add `dim`")),
    }
}

fn check_len(field: String, v: &[f64], dim: usize) -> Result<()> {
    if v.len() != dim {
        return Err(doc_err(
            field,
            format!("expected {dim} coordinates, got {}", v.len()),
        ));
    }
    Ok(())
}

/// A triplet together with the optional `alpha` key of its document.
#[derive(Debug, Clone, PartialEq)]
pub struct TripletInput {
    pub alpha: Option<f64>,
    pub triplet: Triplet,
}

pub fn parse_triplet(text: &str) -> Result<TripletInput> {
    let doc: TripletDoc = parse(text)?;
    let first = doc
        .atoms
        .first()
        .map(|a| a.point.len())
        .or_else(|| doc.polar.first().map(|p| p.direction.len()))
        .or(Some(doc.gamma.len()));
    let dim = infer_dim(doc.dim, first, "gamma")?;
    check_len("gamma".into(), &doc.gamma, dim)?;
    let flavor = Centering::parse(&doc.flavor).ok_or_else(|| {
        doc_err(
            "flavor",
            format!("`{}` is not raw, drift or mean", doc.flavor),
        )
    })?;
    if !doc.atoms.is_empty() && !doc.polar.is_empty() {
        return Err(doc_err(
            "polar",
            "give either [[atoms]] or [[polar]], not both",
        ));
    }
    let nu = if doc.polar.is_empty() {
        let mut atoms = Vec::with_capacity(doc.atoms.len());
        for (i, a) in doc.atoms.iter().enumerate() {
            check_len(format!("atoms[{i}].point"), &a.point, dim)?;
            let one = AtomicMeasure::new(dim, vec![Atom::new(a.point.clone(), a.mass)])
                .map_err(|e| doc_err(format!("atoms[{i}]"), e))?;
            atoms.extend(one.atoms().iter().cloned());
        }
        LevyMeasure::Atomic(AtomicMeasure::new(dim, atoms).map_err(|e| doc_err("atoms", e))?)
    } else {
        let mut comps = Vec::with_capacity(doc.polar.len());
        for (i, p) in doc.polar.iter().enumerate() {
            check_len(format!("polar[{i}].direction"), &p.direction, dim)?;
            let direction = UnitVector::normalize(&p.direction)
                .map_err(|e| doc_err(format!("polar[{i}].direction"), e))?;
            let radial = match (p.power_law, p.radii.is_empty()) {
                (Some(alpha), true) => Radial::PowerLaw { alpha },
                (None, false) => Radial::Atoms(p.radii.iter().map(|[r, q]| (*r, *q)).collect()),
                _ => {
                    return Err(doc_err(
                        format!("polar[{i}]"),
                        "give exactly one of `power_law` and `radii`",
                    ))
                }
            };
            comps.push(PolarComponent {
                direction,
                weight: p.weight,
                radial,
            });
        }
        LevyMeasure::Polar(PolarMeasure::new(dim, comps).map_err(|e| doc_err("polar", e))?)
    };
    let triplet = Triplet::new(nu, doc.gamma, flavor).map_err(|e| doc_err("flavor", e))?;
    Ok(TripletInput {
        alpha: doc.alpha,
        triplet,
    })
}

fn triplet_doc(t: &Triplet, alpha: Option<f64>) -> TripletDoc {
    let (atoms, polar) = match t.nu() {
        LevyMeasure::Atomic(m) => (
            m.atoms()
                .iter()
                .map(|a| AtomDoc {
                    point: a.point.clone(),
                    mass: a.mass,
                })
                .collect(),
            Vec::new(),
        ),
        LevyMeasure::Polar(p) => (
            Vec::new(),
            p.components()
                .iter()
                .map(|c| {
                    let (power_law, radii) = match &c.radial {
                        Radial::PowerLaw { alpha } => (Some(*alpha), Vec::new()),
                        Radial::Atoms(rs) => (None, rs.iter().map(|(r, q)| [*r, *q]).collect()),
                    };
                    PolarDoc {
                        direction: c.direction.coords().to_vec(),
                        weight: c.weight,
                        power_law,
                        radii,
                    }
                })
                .collect(),
        ),
    };
    TripletDoc {
        alpha,
        dim: Some(t.dim()),
        flavor: t.flavor().name().to_string(),
        gamma: t.gamma().to_vec(),
        atoms,
        polar,
    }
}

pub fn triplet_to_toml(t: &Triplet) -> String {
    render(&triplet_doc(t, None))
}

fn spectral_from_docs(entries: &[SpectralDoc], dim: usize) -> Result<SphericalMeasure> {
    let mut atoms = Vec::with_capacity(entries.len());
    for (i, s) in entries.iter().enumerate() {
        check_len(format!("spectral[{i}].direction"), &s.direction, dim)?;
        let xi = UnitVector::normalize(&s.direction)
            .map_err(|e| doc_err(format!("spectral[{i}].direction"), e))?;
        if !(s.weight > 0.0 && s.weight.is_finite()) {
            return Err(doc_err(
                format!("spectral[{i}].weight"),
                "must be positive and finite",
            ));
        }
        atoms.push((xi, s.weight));
    }
    SphericalMeasure::new(dim, atoms).map_err(|e| doc_err("spectral", e))
}

fn spectral_docs(s: &SphericalMeasure) -> Vec<SpectralDoc> {
    s.atoms()
        .iter()
        .map(|(xi, w)| SpectralDoc {
            direction: xi.coords().to_vec(),
            weight: *w,
        })
        .collect()
}

pub fn parse_law(text: &str) -> Result<StableLaw> {
    let doc: LawDoc = parse(text)?;
    let alpha = doc.alpha.ok_or_else(|| doc_err("alpha", "missing"))?;
    let first = doc
        .spectral
        .first()
        .map(|s| s.direction.len())
        .or(doc.tau.as_ref().map(|t| t.len()));
    let dim = infer_dim(doc.dim, first, "spectral")?;
    let spectral = spectral_from_docs(&doc.spectral, dim)?;
    let tau = doc.tau.unwrap_or_else(|| vec![0.0; dim]);
    check_len("tau".into(), &tau, dim)?;
    StableLaw::new(alpha, spectral, tau).map_err(|e| doc_err("alpha", e))
}

/// A spherical measure from `[[spectral]]` entries; other keys are ignored
/// apart from `dim`.
pub fn parse_spherical(text: &str) -> Result<SphericalMeasure> {
    let doc: LawDoc = parse(text)?;
    let first = doc.spectral.first().map(|s| s.direction.len());
    let dim = infer_dim(doc.dim, first, "spectral")?;
    spectral_from_docs(&doc.spectral, dim)
}

fn law_doc(s: &StableLaw) -> LawDoc {
    LawDoc {
        alpha: Some(s.alpha()),
        dim: Some(s.dim()),
        tau: Some(s.tau().to_vec()),
        spectral: spectral_docs(s.spectral()),
        _certificate: None,
    }
}

pub fn law_to_toml(s: &StableLaw) -> String {
    render(&law_doc(s))
}

pub fn parse_spec(text: &str) -> Result<ShotNoiseSpec> {
    let doc: SpecDoc = parse(text)?;
    let mut truncation = Truncation::default();
    if let Some(m) = doc.max_terms {
        truncation.max_terms = m;
    }
    if let Some(b) = doc.tail_budget {
        if !(b > 0.0) {
            return Err(doc_err("tail_budget", "must be positive"));
        }
        truncation.tail_budget = b;
    }
    let seed = doc.seed.unwrap_or(DEFAULT_SEED);
    match (doc.jumps.is_empty(), doc.atoms.is_empty()) {
        (false, true) => {
            let theta = doc.theta.ok_or_else(|| doc_err("theta", "missing"))?;
            let dim = doc.jumps[0].point.len();
            for (i, j) in doc.jumps.iter().enumerate() {
                check_len(format!("jumps[{i}].point"), &j.point, dim)?;
            }
            let law = JumpLaw::new(
                dim,
                doc.jumps
                    .iter()
                    .map(|j| (j.point.clone(), j.prob))
                    .collect(),
            )
            .map_err(|e| doc_err("jumps", e))?;
            ShotNoiseSpec::new(doc.alpha, theta, law, truncation, seed)
                .map_err(|e| doc_err("alpha", e))
        }
        (true, false) => {
            if doc.theta.is_some() {
                return Err(doc_err("theta", "implied by [[atoms]]; remove it"));
            }
            let dim = doc.atoms[0].point.len();
            let mut atoms = Vec::new();
            for (i, a) in doc.atoms.iter().enumerate() {
                check_len(format!("atoms[{i}].point"), &a.point, dim)?;
                atoms.push(Atom::new(a.point.clone(), a.mass));
            }
            let nu = AtomicMeasure::new(dim, atoms).map_err(|e| doc_err("atoms", e))?;
            ShotNoiseSpec::from_levy_measure(doc.alpha, &nu, truncation, seed)
                .map_err(|e| doc_err("atoms", e))
        }
        _ => Err(doc_err(
            "jumps",
            "give exactly one of [[jumps]] and [[atoms]]",
        )),
    }
}

#[derive(Serialize)]
struct ConditionDoc {
    id: &'static str,
    passed: bool,
    value: f64,
}

#[derive(Serialize)]
struct DomainDoc {
    alpha: f64,
    member: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    xlog: Option<Vec<f64>>,
    conditions: Vec<ConditionDoc>,
}

fn domain_doc(r: &DomainReport) -> DomainDoc {
    DomainDoc {
        alpha: r.alpha,
        member: r.member,
        xlog: r.xlog.clone(),
        conditions: r
            .conditions
            .iter()
            .map(|c| ConditionDoc {
                id: c.id.as_str(),
                passed: c.passed,
                value: c.value,
            })
            .collect(),
    }
}

pub fn domain_report_to_toml(r: &DomainReport) -> String {
    render(&domain_doc(r))
}

#[derive(Serialize)]
struct IteratedDoc {
    member: bool,
    first: DomainDoc,
    #[serde(skip_serializing_if = "Option::is_none")]
    second: Option<DomainDoc>,
}

pub fn iterated_report_to_toml(r: &IteratedReport) -> String {
    render(&IteratedDoc {
        member: r.member,
        first: domain_doc(&r.first),
        second: r.second.as_ref().map(domain_doc),
    })
}

#[derive(Serialize)]
struct TauTermDoc {
    point: Vec<f64>,
    mass: f64,
    contribution: Vec<f64>,
}

#[derive(Serialize)]
struct CertificateDoc {
    spectral_constant: f64,
    lambda: Vec<SpectralDoc>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    tau_terms: Vec<TauTermDoc>,
}

#[derive(Serialize)]
struct PushDoc {
    alpha: f64,
    dim: usize,
    tau: Vec<f64>,
    spectral: Vec<SpectralDoc>,
    certificate: CertificateDoc,
}

pub fn pushforward_to_toml(s: &StableLaw, c: &PushforwardCertificate) -> String {
    render(&PushDoc {
        alpha: s.alpha(),
        dim: s.dim(),
        tau: s.tau().to_vec(),
        spectral: spectral_docs(s.spectral()),
        certificate: CertificateDoc {
            spectral_constant: c.constant.value,
            lambda: spectral_docs(&c.lambda),
            tau_terms: c
                .tau_terms
                .iter()
                .map(|t| TauTermDoc {
                    point: t.point.clone(),
                    mass: t.mass,
                    contribution: t.contribution.clone(),
                })
                .collect(),
        },
    })
}

#[derive(Serialize)]
struct RepDoc {
    representable: bool,
    alpha_case: &'static str,
    witness: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    preimage: Option<TripletDoc>,
}

pub fn rep_certificate_to_toml(c: &RepCertificate) -> String {
    render(&RepDoc {
        representable: c.representable,
        alpha_case: c.case.as_str(),
        witness: c.witness.clone(),
        preimage: c.preimage.as_ref().map(|t| triplet_doc(t, None)),
    })
}

#[derive(Serialize)]
struct PairDoc {
    identical_images: bool,
    first: TripletDoc,
    second: TripletDoc,
    first_law: LawDoc,
    second_law: LawDoc,
}

pub fn pair_to_toml(p: &NonInjectivePair, identical: bool) -> String {
    render(&PairDoc {
        identical_images: identical,
        first: triplet_doc(&p.first, None),
        second: triplet_doc(&p.second, None),
        first_law: law_doc(&p.first_law),
        second_law: law_doc(&p.second_law),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triplet_round_trip() {
        let text = "alpha = 0.5\nflavor = \"drift\"\ngamma = [0.0]\n[[atoms]]\npoint = [1.0]\nmass = 1.0\n";
        let input = parse_triplet(text).unwrap();
        assert_eq!(input.alpha, Some(0.5));
        let again = parse_triplet(&triplet_to_toml(&input.triplet)).unwrap();
        assert_eq!(again.triplet, input.triplet);
    }

    #[test]
    fn power_law_triplet_round_trip() {
        let lambda = SphericalMeasure::on_line(&[(1.0, 0.5), (-1.0, 2.0)]).unwrap();
        let t = Triplet::new(
            LevyMeasure::Polar(PolarMeasure::power_law(&lambda, 0.7).unwrap()),
            vec![0.3],
            Centering::Raw,
        )
        .unwrap();
        assert_eq!(parse_triplet(&triplet_to_toml(&t)).unwrap().triplet, t);
    }

    #[test]
    fn law_round_trip_and_normalization() {
        let text =
            "alpha = 1.5\ntau = [0.0, 0.0]\n[[spectral]]\ndirection = [3.0, 4.0]\nweight = 2.0\n";
        let law = parse_law(text).unwrap();
        assert!((law.spectral().atoms()[0].0.coords()[1] - 0.8).abs() < 1e-15);
        assert_eq!(parse_law(&law_to_toml(&law)).unwrap(), law);
    }

    #[test]
    fn empty_law_needs_dim() {
        assert!(parse_law("alpha = 1.0\n").is_err());
        let law = parse_law("alpha = 1.0\ndim = 2\n").unwrap();
        assert!(law.is_point_mass());
    }

    #[test]
    fn diagnostics_name_the_field() {
        let e = parse_triplet(
            "flavor = \"drift\"\ngamma = [0.0]\n[[atoms]]\npoint = [1.0]\nmass = -1.0\n",
        )
        .unwrap_err()
        .to_string();
        assert!(e.contains("atoms[0]"), "{e}");
        let e = parse_triplet("flavor = \"sideways\"\ngamma = [0.0]\n")
            .unwrap_err()
            .to_string();
        assert!(e.contains("flavor"), "{e}");
        let e =
            parse_law("alpha = 1.5\n[[spectral]]\ndirection = [1.0]\nweight = 1.0\nbogus = 2\n")
                .unwrap_err()
                .to_string();
        assert!(e.contains("bogus") && e.contains("line"), "{e}");
        let e = parse_triplet(
            "flavor = \"raw\"\ngamma = [0.0, 1.0]\n[[atoms]]\npoint = [1.0]\nmass = 1.0\n",
        )
        .unwrap_err()
        .to_string();
        assert!(e.contains("gamma"), "{e}");
    }

    #[test]
    fn spec_forms() {
        let a =
            parse_spec("alpha = 0.5\ntheta = 2.0\n[[jumps]]\npoint = [1.0]\nprob = 1.0\n").unwrap();
        let b = parse_spec("alpha = 0.5\n[[atoms]]\npoint = [1.0]\nmass = 2.0\n").unwrap();
        assert_eq!(a.theta, b.theta);
        assert_eq!(a.seed, DEFAULT_SEED);
        assert!(parse_spec("alpha = 0.5\ntheta = 1.0\n").is_err());
        // α ≥ 1 with nonzero jump mean
        assert!(
            parse_spec("alpha = 1.5\ntheta = 1.0\n[[jumps]]\npoint = [1.0]\nprob = 1.0\n").is_err()
        );
    }
}
