use std::path::PathBuf;

use levylab::LevyError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error at `{field}`: {message}")]
    Config { field: String, message: String },

    #[error("[{code}] {0}", code = .0.code())]
    Levy(#[from] LevyError),

    #[error("cannot write `{}`: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },

    #[error("gate `{invariant}` failed: {detail}")]
    Gate { invariant: String, detail: String },
}

impl CliError {
    pub fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Config { field: field.into(), message: message.into() }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }

    /// 2 for anything the user can fix in the model or flags, 1 for numeric
    /// failures and failed gates.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config { .. } | CliError::Io { .. } => 2,
            CliError::Levy(e) => match e {
                LevyError::Spec { .. }
                | LevyError::InvalidModel(_)
                | LevyError::NoLevyMeasure(_)
                | LevyError::InvalidArgument(_)
                | LevyError::ShiftTooLarge { .. }
                | LevyError::InsufficientSpan(_) => 2,
                _ => 1,
            },
            CliError::Gate { .. } => 1,
        }
    }
}
