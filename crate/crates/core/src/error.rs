use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    MalformedInput(String),

    #[error("unsupported format: {0}")]
    UnsupportedFormat(String),

    #[error("incompatible file: {0}")]
    IncompatibleFile(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unsupported input: {0}")]
    UnsupportedInput(String),

    #[error("degree statistics are undefined for an empty graph")]
    UndefinedStats,

    #[error("singular matrix: zero diagonal at row {row}")]
    SingularMatrix { row: usize },

    #[error("training diverged at epoch {epoch}")]
    TrainingDiverged { epoch: usize },

    #[error("oracle `{oracle}` limited to {limit} vertices, got {n}")]
    OracleSize {
        oracle: &'static str,
        limit: usize,
        n: usize,
    },

    #[error("fetch failed: {0}")]
    Fetch(String),

    #[error("dataset verification failed: {0}")]
    DatasetVerification(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn malformed(msg: impl Into<String>) -> Self {
        Error::MalformedInput(msg.into())
    }

    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}
