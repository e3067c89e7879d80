// SPDX-License-Identifier: MIT OR Apache-2.0

use thiserror::Error;

/// Errors produced by the detector, the simulators and the I/O layer.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or missing input data.
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// A row of a CSV input could not be parsed.
    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },
    /// A structural requirement of the method is violated (too short series,
    /// index out of range, incompatible tuning parameters, ...).
    #[error("constraint violated: {0}")]
    Constraint(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn constraint(msg: impl Into<String>) -> Self {
        Self::Constraint(msg.into())
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Self::InvalidInput(msg.into())
    }

    /// Process exit code used by the command line front end:
    /// 2 for input errors, 3 for constraint violations.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Constraint(_) => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
