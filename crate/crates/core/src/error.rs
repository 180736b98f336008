use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A caller-supplied value violated a precondition.
    #[error("invalid input: {0}")]
    Input(String),

    #[error("failed to decode image: {0}")]
    Decode(String),

    #[error("ingestion failed for entry `{entry}`: {reason}")]
    Ingestion { entry: String, reason: String },

    /// Histogram support too small to be matched against a 5-color palette.
    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("no query token survived normalization or matched the vocabulary (dropped: {dropped:?})")]
    Query { dropped: Vec<String> },

    #[error("subgroup `{0}` selected no trials")]
    EmptySubgroup(String),

    #[error("checkpoint: {0}")]
    Checkpoint(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }
}
