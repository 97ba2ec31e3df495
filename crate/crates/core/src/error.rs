use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An input lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A digit could not be certified within the configured precision cap.
    #[error("precision error: {0}")]
    Precision(String),
    /// A decision needs more digits of the expansion of one than are materialized.
    #[error("depth error: {0}")]
    Depth(String),
    /// A root bracket or iteration failed to converge.
    #[error("convergence error: {0}")]
    Convergence(String),
    /// A construction's structural precondition failed.
    #[error("construction error: {0}")]
    Spec(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

pub(crate) fn depth<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Depth(msg.into()))
}
