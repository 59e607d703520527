use thiserror::Error;

/// Errors surfaced by the command line, each tied to an exit status.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{0}")]
    File(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::File(_) => 3,
        }
    }
}

impl From<pubbias_core::Error> for CliError {
    fn from(e: pubbias_core::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}
