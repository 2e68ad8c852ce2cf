use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("argument out of range: {0}")]
    OutOfRange(String),

    #[error("invalid parameter triple (n={n}, M={m}, tau={tau}): {reason}")]
    InvalidTriple {
        n: usize,
        m: u64,
        tau: usize,
        reason: String,
    },

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("instance too large for exhaustive enumeration: {0}")]
    Intractable(String),

    #[error("triple {0} is not part of the workbook")]
    UnknownTriple(String),

    #[error("malformed array file: {0}")]
    Malformed(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
