//! CLI failures carry one of the documented exit codes: 3 for unreadable,
//! unparseable, or invalid input; 4 when the capacity solver exhausts its
//! budget; 5 when a selection enumeration would exceed the cap. Usage
//! errors exit 2 inside the argument parser before any of this runs.

use std::process::ExitCode;

use privchan_core::Error as CoreError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Unreadable, unparseable, or semantically invalid input.
    #[error("{0}")]
    Validation(String),

    /// The capacity solver did not reach the requested bracket width.
    #[error("{0}")]
    Convergence(String),

    /// A selection enumeration would exceed the configured cap.
    #[error("{0}")]
    EnumerationCap(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Validation(_) => ExitCode::from(3),
            CliError::Convergence(_) => ExitCode::from(4),
            CliError::EnumerationCap(_) => ExitCode::from(5),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(err: CoreError) -> Self {
        match err {
            CoreError::Convergence { .. } => CliError::Convergence(err.to_string()),
            CoreError::EnumerationTooLarge { .. } => CliError::EnumerationCap(err.to_string()),
            _ => CliError::Validation(err.to_string()),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
