use std::path::Path;

use neocalc_core::AnalysisError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Well-formed input that the analysis rejects.
    #[error("{0}")]
    Validation(String),
    /// Input that could not be read as numbers at all.
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn io(path: &Path, e: std::io::Error) -> Self {
        CliError::Io(format!("{}: {e}", path.display()))
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) | CliError::Io(_) => 2,
            CliError::Parse(_) => 3,
        }
    }
}

impl From<AnalysisError> for CliError {
    fn from(e: AnalysisError) -> Self {
        CliError::Validation(e.to_string())
    }
}
