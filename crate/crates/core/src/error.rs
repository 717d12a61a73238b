use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the reduction pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("invalid index: {0}")]
    Index(String),

    #[error("point outside the unit box: {0}")]
    Domain(String),

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("malformed number {text:?}: {reason}")]
    Number { text: String, reason: String },

    #[error("brute force refused: n = {n} exceeds the cap of {cap} variables")]
    OracleCap { n: usize, cap: usize },

    #[error("solver bug: {0}")]
    SolverBug(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
