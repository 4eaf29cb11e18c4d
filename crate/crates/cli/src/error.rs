use std::path::PathBuf;

use spectherm::Error as CoreError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed or semantically invalid configuration. `line` is 1-based.
    #[error("{}", config_message(.path, .line, .message))]
    Config {
        path: Option<PathBuf>,
        line: Option<usize>,
        message: String,
    },

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("unsupported: {0}")]
    Unsupported(String),
}

fn config_message(path: &Option<PathBuf>, line: &Option<usize>, message: &str) -> String {
    match (path, line) {
        (Some(p), Some(l)) => format!("config error at {}:{l}: {message}", p.display()),
        (Some(p), None) => format!("config error in {}: {message}", p.display()),
        (None, Some(l)) => format!("config error at line {l}: {message}"),
        (None, None) => format!("config error: {message}"),
    }
}

impl CliError {
    pub fn config(message: impl Into<String>) -> Self {
        CliError::Config { path: None, line: None, message: message.into() }
    }

    pub fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        CliError::Io { context: context.into(), source }
    }

    /// 0 success, 2 configuration, 3 numerical failure, 4 unsupported combination.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } | CliError::Io { .. } => 2,
            CliError::Numerical(_) => 3,
            CliError::Unsupported(_) => 4,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::InvalidArgument(_) | CoreError::DegenerateBoundary { .. } => CliError::config(e.to_string()),
            CoreError::UnsupportedShape(_) => CliError::Unsupported(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
