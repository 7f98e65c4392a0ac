use thiserror::Error;

/// Errors raised by the exact engine and its front ends.
#[derive(Debug, Error)]
pub enum Error {
    /// An input violated an operation's precondition.
    #[error("domain error: {0}")]
    Domain(String),

    /// Odd weights carry no nonzero forms for the trivial character.
    #[error("unsupported weight {0}: weight must be even and at least 2")]
    UnsupportedWeight(u32),

    /// A subspace that should be stable under an operator was not.
    #[error("invariant violated: {0}")]
    Invariant(String),

    /// A mathematical consistency check failed; this always indicates a bug.
    #[error("internal consistency check failed: {0}")]
    Internal(String),

    #[error("cache error: {0}")]
    Cache(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}
