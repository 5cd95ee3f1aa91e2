use std::io;

use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    /// An iterative solver ran out of iterations. `estimate` carries the best
    /// value reached and `residuals` the last residual norms.
    #[error("{solver} did not converge after {iterations} iterations (max residual {max_residual:e})")]
    NonConvergence {
        solver: &'static str,
        iterations: usize,
        max_residual: f64,
        estimate: Vec<f64>,
        residuals: Vec<f64>,
    },

    #[error("matrix of dimension {n} exceeds the limit of {limit} for {operation}")]
    TooLarge {
        operation: &'static str,
        n: usize,
        limit: usize,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Process exit code for the command-line driver: 1 invalid input,
    /// 2 numerical non-convergence, 3 I/O failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NonConvergence { .. } => 2,
            Error::Io(_) => 3,
            Error::Csv(e) if matches!(e.kind(), csv::ErrorKind::Io(_)) => 3,
            Error::Json(e) if e.is_io() => 3,
            _ => 1,
        }
    }

    /// Best estimate carried by a non-convergence error, if any.
    pub fn best_estimate(&self) -> Option<&[f64]> {
        match self {
            Error::NonConvergence { estimate, .. } => Some(estimate),
            _ => None,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
