use thiserror::Error;

/// Errors raised by every fallible operation in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside its documented domain.
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// Vectors, matrices, or grids do not have matching shapes.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    /// A covariance matrix admits no Cholesky factorization.
    #[error("matrix is not symmetric positive definite")]
    NotPositiveDefinite,
    /// The requested variant or combination has no implementation.
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// A precondition of a bound fails, so no certificate exists.
    #[error("infeasible: {0}")]
    Infeasible(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
