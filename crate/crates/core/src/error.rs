use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Unknown Cartan type, invalid diagram automorphism and similar setup problems.
    #[error("configuration error: {0}")]
    Config(String),
    /// An operation was called outside of its domain.
    #[error("argument error: {0}")]
    Argument(String),
    /// A literal could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),
    /// A search ran out of its node budget.
    #[error("resource budget exceeded: {what} (budget {budget})")]
    Resource { what: String, budget: usize },
    /// An internal consistency check failed; this indicates a bug.
    #[error("integrity failure: {0}")]
    Integrity(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn argument<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Argument(msg.into()))
}

pub(crate) fn integrity<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Integrity(msg.into()))
}
