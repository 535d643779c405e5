use thiserror::Error;

/// Errors raised across the allocation library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// An operation was invoked outside its precondition.
    #[error("contract violation: {0}")]
    ContractViolation(String),

    #[error("outside the model's domain: {0}")]
    Domain(String),

    /// The exact search would exceed its documented size or effort bound.
    #[error("resource limit: {0}")]
    ResourceLimit(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
