use std::path::{Path, PathBuf};

use bep_core::BepError;

/// Failure of a CLI command, grouped by exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad arguments, unreadable or malformed input (exit 2).
    #[error("{0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    /// A computation would exceed a size cap (exit 3).
    #[error("{0}")]
    Resource(String),
    /// The input is well formed but the operation does not apply (exit 4).
    #[error("{0}")]
    Precondition(String),
}

pub type CliResult<T> = Result<T, CliError>;

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Io { .. } => 2,
            CliError::Resource(_) => 3,
            CliError::Precondition(_) => 4,
        }
    }

    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io { path: path.to_path_buf(), source }
    }
}

impl From<BepError> for CliError {
    fn from(e: BepError) -> Self {
        let msg = e.to_string();
        match e {
            BepError::ResourceCap { .. } | BepError::Overflow => CliError::Resource(msg),
            BepError::NotStrictEquilibrium(_)
            | BepError::RegionBoundary { .. }
            | BepError::NotRestPoint { .. }
            | BepError::NoSignChange { .. }
            | BepError::StepLeavesSimplex { .. }
            | BepError::NonFiniteState
            | BepError::DisjointTimeRanges => CliError::Precondition(msg),
            BepError::Schema(_) | BepError::InvalidParameter(_) | BepError::InvalidState(_) | BepError::UnknownAction(_) => {
                CliError::Config(msg)
            }
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Config(format!("JSON: {e}"))
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Config(format!("CSV: {e}"))
    }
}
