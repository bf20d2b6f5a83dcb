use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("centering {target} is not admissible: {reason}")]
    Inadmissible {
        target: &'static str,
        reason: String,
    },
    #[error("outside the domain of the integral mapping: {0}")]
    Domain(String),
    #[error("law is not strictly stable: {0}")]
    NotStrict(String),
    #[error("shift outside span of the spectral support (residual {residual:e})")]
    ShiftOutsideSpan { residual: f64 },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("document error: {0}")]
    Document(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Invalid(msg.into()))
}
