use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StabError {
    /// An argument outside the mathematical domain of the operation (zero, non-prime, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A configured memory or enumeration ceiling would be exceeded.
    #[error("resource limit: {0}")]
    Resource(String),

    /// The local splitting at `prime` could not be decided without a fixture override.
    #[error("local splitting at p = {prime} needs an override: {reason}")]
    NeedsOverride { prime: u64, reason: String },

    /// A constant or prediction that is not defined for the requested input.
    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for StabError {
    fn from(e: std::io::Error) -> Self {
        StabError::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, StabError>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(StabError::Domain(msg.into()))
}

pub(crate) fn resource<T>(msg: impl Into<String>) -> Result<T> {
    Err(StabError::Resource(msg.into()))
}
