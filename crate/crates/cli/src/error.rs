use perm_moments::Error as CoreError;
use thiserror::Error;

/// Failures that end a command, each mapped to a process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed input file or contents.
    #[error("{0}")]
    Input(String),
    /// Flags that are individually valid but do not combine.
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(CoreError::ZeroVariance(_)) => 3,
            _ => 2,
        }
    }
}
