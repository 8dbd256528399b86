use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("index {index} is beyond the horizon {horizon}")]
    OutOfHorizon { index: usize, horizon: usize },

    #[error("invalid sampling: level {level} contains index {index} < {level}")]
    InvalidSampling { level: usize, index: usize },

    #[error("invalid sampling: {0}")]
    MalformedSampling(String),

    #[error("epsilon must be positive, got {0}")]
    InvalidEpsilon(String),

    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("evaluation error at n = {index}: {message}")]
    Eval { index: usize, message: String },

    #[error("invalid expression: {0}")]
    InvalidExpr(String),

    #[error("unknown atom `{name}` at position {position}")]
    UnknownAtom { name: String, position: usize },

    #[error("ingestion error at row {row}{}: {message}", column.map(|c| format!(", column {c}")).unwrap_or_default())]
    Ingest {
        row: usize,
        column: Option<usize>,
        message: String,
    },

    #[error("configuration error in `{field}`: {message}")]
    Config { field: String, message: String },

    #[error("no member with id {0}")]
    UnknownMember(usize),

    #[error("internal inconsistency: {0}")]
    Internal(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            message: message.into(),
        }
    }

    pub(crate) fn syntax(position: usize, message: impl Into<String>) -> Self {
        Error::Syntax {
            position,
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }
}
