use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("shape error: {0}")]
    Shape(String),

    #[error("algebra mismatch: expected `{expected}`, found `{found}`")]
    AlgebraMismatch { expected: String, found: String },

    #[error("invalid homomorphism: {0}")]
    HomInvalid(String),

    #[error("not a derivation: Leibniz residual {residual:.3e} at basis pair ({i}, {j})")]
    NotADerivation { i: usize, j: usize, residual: f64 },

    #[error("{path}:{line}:{column}: parse error: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("validation error: {0}")]
    Validation(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn mismatch(expected: &str, found: &str) -> Self {
        Error::AlgebraMismatch {
            expected: expected.to_owned(),
            found: found.to_owned(),
        }
    }
}
