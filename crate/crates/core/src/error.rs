use thiserror::Error;

/// Errors raised across the library.
///
/// The variants are grouped by how a caller is expected to react: input and
/// data errors mean the request itself is malformed, capability errors mean
/// an exact routine was asked to run past its size cap, and domain /
/// applicability errors mean a formula is not defined (or is vacuous) at the
/// requested parameters.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("invalid data: {0}")]
    Data(String),
    #[error("capability exceeded: {0}")]
    Capability(String),
    #[error("formula outside its domain: {0}")]
    Domain(String),
    #[error("bound not applicable: {0}")]
    Applicability(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn capability(msg: impl Into<String>) -> Self {
        Error::Capability(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
