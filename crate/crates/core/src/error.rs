use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Inputs whose shapes do not fit the operation.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid code: {0}")]
    InvalidCode(String),

    #[error("invalid code specification: {0}")]
    InvalidSpec(String),

    #[error("unsupported computation: {what} (limit {limit})")]
    Unsupported { what: String, limit: usize },

    #[error("polynomial division by zero")]
    DivisionByZero,

    /// An internal consistency check failed; indicates bad metadata such as a wrong d0.
    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("decode failure: {0}")]
    DecodeFailure(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
