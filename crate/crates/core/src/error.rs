use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument or parsed object violates a documented precondition.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The request exceeds the supported desk-scale problem size.
    #[error("size limit exceeded: {0}")]
    SizeLimit(String),

    /// A computed result violates an invariant it must satisfy.
    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("malformed file: {0}")]
    Format(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
