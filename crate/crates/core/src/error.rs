use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("infeasible region: {0}")]
    InfeasibleRegion(String),

    #[error("resource guard exceeded: {0}")]
    ResourceGuard(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn params(msg: impl Into<String>) -> Error {
    Error::InvalidParameters(msg.into())
}
