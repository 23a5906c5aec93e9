//! Crate-wide error type.

use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Invalid configuration (rejected before any work starts).
    #[error("invalid configuration: {0}")]
    Config(String),

    /// Structurally invalid data (shape mismatches, domain violations).
    #[error("invalid data: {0}")]
    Data(String),

    /// Malformed input file; `line` is 1-based and includes the header.
    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: u64,
        message: String,
    },

    /// An objective produced a non-finite derivative.
    #[error("non-finite {what} at row {row}, output {output}")]
    NonFiniteDerivative {
        what: &'static str,
        row: usize,
        output: usize,
    },

    /// A treatment arm required for fitting contains no rows.
    #[error("cannot fit: {arm} arm (t={t}) has no rows")]
    EmptyArm { arm: &'static str, t: u8 },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Classify a csv-layer error: underlying I/O failures stay I/O errors,
    /// anything else is a data problem.
    pub(crate) fn from_csv(path: impl Into<PathBuf>, source: csv::Error) -> Self {
        let path = path.into();
        match source.into_kind() {
            csv::ErrorKind::Io(io) => Error::Io { path, source: io },
            other => Error::Data(format!("{}: {other:?}", path.display())),
        }
    }
}
