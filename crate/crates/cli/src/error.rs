use std::process::ExitCode;

use thiserror::Error;

/// Failures sorted by exit status: usage and parse problems exit 2,
/// domain-level negatives exit 1.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {message}")]
    Parse { path: String, message: String },
    #[error("{0}")]
    Domain(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn code(&self) -> ExitCode {
        match self {
            CliError::Domain(_) => ExitCode::from(1),
            _ => ExitCode::from(2),
        }
    }

    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn domain(msg: impl std::fmt::Display) -> Self {
        CliError::Domain(msg.to_string())
    }

    pub fn parse(path: &str, msg: impl std::fmt::Display) -> Self {
        CliError::Parse {
            path: path.to_string(),
            message: msg.to_string(),
        }
    }
}

pub type CliResult<T = ()> = Result<T, CliError>;
