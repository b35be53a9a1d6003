use thiserror::Error;

/// Errors raised by the core constructions.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A precondition on the inputs did not hold.
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// A lookup fell outside the object it was asked of.
    #[error("domain error: {0}")]
    Domain(String),
    /// A configured resource cap would be exceeded.
    #[error("resource limit: {0}")]
    Resource(String),
    /// A malformed series, schedule or approximation matrix.
    #[error("malformed input: {0}")]
    Malformed(String),
    /// A construction invariant failed. Always a bug.
    #[error("internal invariant violated: {0}")]
    Internal(String),
    /// Text that does not follow one of the file formats.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
