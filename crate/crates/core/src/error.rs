//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by parsing, fitting and analysis routines.
#[derive(Debug, Error)]
#[non_exhaustive]
pub enum Error {
    /// Input stream could not be parsed. `line` is 1-based.
    #[error("parse error at line {line}: {message}")]
    Parse {
        /// 1-based line number in the offending stream.
        line: usize,
        /// Human-readable description of the problem.
        message: String,
    },

    /// Structurally invalid argument (inconsistent dimensions, bad degree
    /// sequence, empty input where data is required, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Iterative solver exhausted its iteration budget.
    #[error("solver did not converge after {iterations} iterations (best residual {residual:.3e})")]
    NonConvergence {
        /// Iterations actually performed.
        iterations: usize,
        /// Best constraint residual reached, in max norm.
        residual: f64,
    },

    /// The requested quantity is not defined for the given model kind.
    #[error("unsupported for model kind {kind}: {message}")]
    Unsupported {
        /// Model kind name as used in serialized output.
        kind: &'static str,
        /// What was requested.
        message: String,
    },

    /// Underlying I/O failure.
    #[error(transparent)]
    Io(#[from] std::io::Error),

    /// Malformed CSV input.
    #[error(transparent)]
    Csv(#[from] csv::Error),

    /// Malformed JSON input.
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    pub(crate) fn invalid(message: impl Into<String>) -> Self {
        Error::InvalidInput(message.into())
    }
}

/// Convenience alias used across the crate.
pub type Result<T> = std::result::Result<T, Error>;
