use std::path::PathBuf;

use thiserror::Error;

/// Errors surfaced by the library and the command-line front end.
#[derive(Debug, Error)]
pub enum Error {
    /// A precondition of a numerical operation was violated.
    #[error("{0}")]
    Domain(String),

    /// Malformed text input (graph file, rational literal).
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// Structurally valid input that names something impossible.
    #[error("invalid input: {0}")]
    Invalid(String),

    /// The instance is too large for an exhaustive routine.
    #[error("{0}")]
    Guard(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("serialization: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
