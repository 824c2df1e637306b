use std::path::PathBuf;

use boxsim_core::ErrorKind;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] boxsim_core::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {message}")]
    Format { path: PathBuf, message: String },
    #[error("{0}")]
    Usage(String),
    #[error("{failed} verification check(s) failed")]
    VerifyFailed { failed: usize },
}

pub type CliResult<T> = Result<T, CliError>;

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn format(path: impl Into<PathBuf>, message: impl ToString) -> Self {
        CliError::Format {
            path: path.into(),
            message: message.to_string(),
        }
    }

    /// Process exit code: 1 verify failure or IO, 2 usage, 3 domain, 4 insufficient data.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) => match e.kind() {
                ErrorKind::Domain => 3,
                ErrorKind::InsufficientData => 4,
                ErrorKind::Parse => 2,
            },
            CliError::Format { .. } | CliError::Usage(_) => 2,
            CliError::Io { .. } | CliError::VerifyFailed { .. } => 1,
        }
    }
}
