//! Failure classes and their process exit codes.

use mfbose_core::error::{Error as CoreError, FockError};
use thiserror::Error;

use crate::config::ConfigError;

#[derive(Debug, Error)]
pub enum LabError {
    #[error("invalid configuration: {0}")]
    Validation(String),
    #[error("solver failure: {0}")]
    Solver(String),
    #[error("identity check failed: {0}")]
    Identity(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl LabError {
    pub fn exit_code(&self) -> i32 {
        match self {
            LabError::Validation(_) => 2,
            LabError::Solver(_) => 3,
            LabError::Identity(_) => 4,
            LabError::Io(_) => 1,
        }
    }

    /// Wraps a core error with the stage it came from.
    pub fn from_core(stage: &str, e: CoreError) -> Self {
        match e {
            CoreError::Model(m) => LabError::Validation(format!("{stage}: {m}")),
            CoreError::Fock(FockError::DimensionOverflow { dim, limit }) => LabError::Solver(format!(
                "{stage}: basis dimension {dim} exceeds the limit {limit}; lower N or the lattice cutoff, or raise solver.basis_limit"
            )),
            other => LabError::Solver(format!("{stage}: {other}")),
        }
    }
}

impl From<ConfigError> for LabError {
    fn from(e: ConfigError) -> Self {
        LabError::Validation(e.to_string())
    }
}

/// `map_err` helper for core results.
pub fn at<T, E: Into<CoreError>>(stage: &str, r: Result<T, E>) -> Result<T, LabError> {
    r.map_err(|e| LabError::from_core(stage, e.into()))
}
