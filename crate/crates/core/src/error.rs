use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the simulator.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is not Hermitian (asymmetry {asymmetry:.3e} exceeds {tolerance:.3e})")]
    NotHermitian { asymmetry: f64, tolerance: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("matrix is singular or not positive definite: {0}")]
    Singular(String),

    #[error("eigendecomposition failed to converge for a {0}x{0} matrix")]
    EigenFailure(usize),

    #[error("invalid config field `{field}`: {reason}")]
    InvalidConfig { field: &'static str, reason: String },

    #[error("invalid solver option `{field}`: {reason}")]
    InvalidOptions { field: &'static str, reason: String },

    #[error("parse error at `{field}`: {reason}")]
    Parse { field: String, reason: String },

    #[error("integrity error for channel ({rx},{tx}): {reason}")]
    Integrity { rx: usize, tx: usize, reason: String },

    #[error("invalid experiment `{field}`: {reason}")]
    InvalidExperiment { field: &'static str, reason: String },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
