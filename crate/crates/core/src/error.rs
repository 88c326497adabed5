use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed or out-of-range input.
    #[error("invalid input: {0}")]
    Invalid(String),
    /// The instance is larger than an exhaustive method is allowed to handle.
    #[error("size limit exceeded: {0}")]
    SizeLimit(String),
    /// The input is well formed but the question has no meaning for it.
    #[error("{0}")]
    Domain(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Invalid(msg.into()))
}
