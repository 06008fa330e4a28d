//! Error types shared across the crate.

use std::path::PathBuf;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A value passed to an operation violated its precondition.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A configuration field violated an invariant. The field name is part of
    /// the message so CLI diagnostics can point at the offending key.
    #[error("invalid config: field `{field}`: {message}")]
    InvalidConfig { field: String, message: String },

    /// A topology event could not be applied to the current live set.
    #[error("invalid topology event: {0}")]
    InvalidEvent(String),

    /// Every agent has failed; the broadcast rotation is empty.
    #[error("no live agents remain")]
    NoLiveAgents,

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// A file produced by this crate failed to re-parse.
    #[error("parse error in {path}, line {line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("json error in {path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}

impl Error {
    pub(crate) fn invalid_config(field: &str, message: impl Into<String>) -> Self {
        Error::InvalidConfig {
            field: field.to_string(),
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
