use std::path::PathBuf;

use thiserror::Error;

pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_NO_SOLUTION: i32 = 3;
pub const EXIT_IO: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("validation error: {0}")]
    Validation(String),

    #[error("no solution: {0}")]
    NoSolution(String),

    #[error("cannot access {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => EXIT_VALIDATION,
            CliError::NoSolution(_) => EXIT_NO_SOLUTION,
            CliError::Io { .. } => EXIT_IO,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn field(field: impl std::fmt::Display, reason: impl std::fmt::Display) -> Self {
        CliError::Validation(format!("{field}: {reason}"))
    }
}

impl From<keygraph::Error> for CliError {
    fn from(e: keygraph::Error) -> Self {
        match e {
            keygraph::Error::Invalid { field, reason } => CliError::field(field, reason),
            e @ keygraph::Error::NoSolution { .. } => CliError::NoSolution(e.to_string()),
            other => CliError::Validation(other.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
