use thiserror::Error;

use qsep_core::Error as CoreError;

/// Failures that end a run before a report exists. Exit codes follow
/// `sysexits.h`, so all of them sit at 64 or above.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("{0}")]
    Data(String),
    #[error("{0}")]
    Missing(String),
    #[error("unsupported: {0}")]
    Unavailable(String),
    #[error("cannot write output: {0}")]
    CantCreate(String),
    #[error("internal fault: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 64,
            CliError::Data(_) => 65,
            CliError::Missing(_) => 66,
            CliError::Unavailable(_) => 69,
            CliError::Internal(_) => 70,
            CliError::CantCreate(_) => 73,
        }
    }

    pub fn from_csv(e: csv::Error) -> Self {
        CliError::Internal(e.to_string())
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::Capability(_) => CliError::Unavailable(e.to_string()),
            CoreError::Internal(_) => CliError::Internal(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Internal(e.to_string())
    }
}
