use std::fmt;
use std::path::Path;

use photolink_core::Error as CoreError;

/// Failure of a subcommand, split by exit status.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad configuration or input data.
    #[error("{0}")]
    Validation(String),
    /// I/O failures and numerical failures on valid input.
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 3,
            CliError::Runtime(_) => 4,
        }
    }

    pub fn validation(msg: impl fmt::Display) -> Self {
        CliError::Validation(msg.to_string())
    }

    pub fn io(path: &Path, err: impl fmt::Display) -> Self {
        CliError::Runtime(format!("{}: {err}", path.display()))
    }

    /// Core errors in context. Domain and consistency errors trace back to
    /// the inputs; fit failures do not.
    pub fn core(context: &str, err: CoreError) -> Self {
        let msg = format!("{context}: {err}");
        match err {
            CoreError::DegenerateFit(_) | CoreError::NoConvergence { .. } => CliError::Runtime(msg),
            _ => CliError::Validation(msg),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
