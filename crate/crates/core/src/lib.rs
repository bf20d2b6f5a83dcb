//! Strictly stable laws as laws of the improper integral ∫₀^∞ t^{−1/α} dX_t.
//!
//! The crate maps Lévy–Khintchine triplets through the integral
//! (symbolically), tests domain membership, builds preimages of strictly
//! stable laws, samples the equivalent shot-noise series, decides which
//! laws a compound Poisson driver can reach, and checks samplers against
//! closed-form characteristic functions.

pub mod cli;
pub mod doc;
pub mod domain;
pub mod error;
pub mod levy;
mod linalg;
pub mod pushforward;
pub mod representability;
pub mod shotnoise;
pub mod simplex;
pub mod special;
pub mod stat;

pub use error::{Error, Result};
pub use levy::{
    cf_infdiv, cf_stable, convert_centering, drift_mean_coincide, is_strictly_stable, levy_moments,
    polar_decompose, Atom, AtomicMeasure, Centering, LevyMeasure, PolarMeasure, Radial,
    SphericalMeasure, StableLaw, Triplet, UnitVector,
};
