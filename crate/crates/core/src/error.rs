use thiserror::Error;

/// Errors raised by the subspace geometry routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("ambient dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("pair is not in generic position: {0}")]
    NotGenericPosition(String),

    #[error("undefined quantity: {0}")]
    Undefined(String),

    #[error("subspace dimension {dim} exceeds the oracle limit of {limit}")]
    TooLarge { dim: usize, limit: usize },

    #[error("empty region: {0}")]
    EmptyRegion(String),

    #[error("inconsistent decomposition: {0}")]
    Inconsistent(String),

    #[error("eigensolver failed to converge on a {0}x{0} matrix")]
    NoConvergence(usize),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
