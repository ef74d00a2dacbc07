use entq_core::Error;
use thiserror::Error;

/// Process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u8)]
pub enum ExitStatus {
    Success = 0,
    Validation = 1,
    InvariantViolation = 2,
    NonConvergence = 3,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),

    #[error("optimizer did not converge: {0}")]
    NonConvergence(String),

    #[error("invariant violated: {0}")]
    Violation(String),

    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_status(&self) -> ExitStatus {
        match self {
            CliError::Core(Error::InvariantViolation(_)) | CliError::Violation(_) => {
                ExitStatus::InvariantViolation
            }
            CliError::NonConvergence(_) => ExitStatus::NonConvergence,
            CliError::Core(_) | CliError::Usage(_) => ExitStatus::Validation,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
