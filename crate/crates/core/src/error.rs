use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A configured resource guard (subset budget, enumeration guard) was hit.
    #[error("resource limit exceeded: {0}")]
    Resource(String),
    /// The requested object provably does not exist.
    #[error("not attainable: {0}")]
    Unattainable(String),
    /// A constructed object failed its own certificate. Always a bug.
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
