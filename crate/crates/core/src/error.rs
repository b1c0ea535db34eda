use thiserror::Error;

/// Errors raised by the numerical and physical routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("input contains non-finite entries")]
    NonFinite,
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("matrix is not symmetric/Hermitian (defect {defect:e})")]
    NotSymmetric { defect: f64 },
    #[error("matrix is not positive definite (smallest eigenvalue {min_eigenvalue:e})")]
    NotPositiveDefinite { min_eigenvalue: f64 },
    #[error("operator is not unitary (defect {defect:e})")]
    NotUnitary { defect: f64 },
    #[error("iteration did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("basis dimension {dim} exceeds the configured limit {limit}")]
    TooLarge { dim: usize, limit: usize },
    #[error("massless open chain has a zero mode; set mass > 0 or use fixed ends")]
    ZeroMode,
    #[error("state has zero norm")]
    ZeroNorm,
    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
