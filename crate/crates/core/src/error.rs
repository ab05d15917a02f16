use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("invalid vertex: {0}")]
    InvalidVertex(String),
    #[error("invalid subset of the base vertex: {0}")]
    InvalidSubset(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("index out of range: {0}")]
    Index(String),
    /// A claimed identity failed on concrete data. The message names the
    /// offending index, subset or entry.
    #[error("verification failed: {0}")]
    Verification(String),
    /// A computation produced data that cannot occur for valid input.
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
