use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid dimension {0}: must be at least 1")]
    InvalidDimension(usize),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("non-finite value encountered in {0}")]
    NonFinite(&'static str),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("invalid damping constant {0}: must be non-negative")]
    InvalidDamping(f64),

    #[error("unsupported order {0}: Hermite roots are available for 1 <= N <= 30")]
    UnsupportedOrder(usize),

    #[error("envelope has no period; supply one explicitly")]
    MissingPeriod,

    #[error("resonance: a = {a} coincides with -n for a nonzero Fourier coefficient c_{n}")]
    Resonance { a: f64, n: i64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("integration failed at t = {t}: step size {step} underflowed")]
    IntegrationFailure { t: f64, step: f64 },

    #[error("eigendecomposition did not converge")]
    EigenFailure,
}
