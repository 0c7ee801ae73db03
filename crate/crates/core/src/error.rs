use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the simulator library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    /// The source of the Poisson equation does not integrate to zero, so no
    /// periodic field exists.
    #[error("net charge {residual:e} exceeds tolerance {tolerance:e}; no periodic field exists")]
    ChargeImbalance { residual: f64, tolerance: f64 },

    #[error("numerical breakdown at t = {t}, cell {cell}: {reason}")]
    NumericalBreakdown { t: f64, cell: usize, reason: String },

    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn config(line: usize, message: impl Into<String>) -> Self {
        Error::Config {
            line,
            message: message.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
