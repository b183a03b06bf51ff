use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("tag dictionary line {line}: {message}")]
    TagDictionary { line: usize, message: String },

    #[error("confusion set file line {line}: {message}")]
    ConfusionSet { line: usize, message: String },

    #[error("feature syntax: {0}")]
    FeatureSyntax(String),

    #[error("training {set}: {message}")]
    Training { set: String, message: String },

    #[error("model file {path} line {line}: {message}")]
    ModelFormat {
        path: String,
        line: usize,
        message: String,
    },

    #[error("{0}")]
    Usage(String),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Usage errors exit with 1, everything else is a data error (2).
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) => 1,
            _ => 2,
        }
    }
}
