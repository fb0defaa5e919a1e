use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("angular grids differ (step {0} vs {1} deg)")]
    GridMismatch(f64, f64),

    #[error("angle {0} deg is not a grid angle")]
    NotOnGrid(f64),

    #[error("pattern gain never drops to -3 dB")]
    NoCrossing,

    #[error("invalid pattern spec `{spec}`: {reason}")]
    PatternSpec { spec: String, reason: String },

    #[error("{path}: {reason}")]
    Validation { path: String, reason: String },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },

    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn validation(path: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Validation {
            path: path.into(),
            reason: reason.into(),
        }
    }

    /// True for errors caused by reading or writing files rather than by their content.
    pub fn is_io(&self) -> bool {
        matches!(self, Error::Io { .. })
    }
}
