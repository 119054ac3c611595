use std::process::ExitCode;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{0}")]
    Io(#[from] std::io::Error),

    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),

    #[error("{0}")]
    Core(curie_core::Error),

    #[error("{context}: {source}")]
    Capacity {
        context: String,
        source: curie_core::Error,
    },

    #[error("{0} check(s) failed")]
    ChecksFailed(usize),
}

impl From<curie_core::Error> for CliError {
    fn from(e: curie_core::Error) -> Self {
        match e {
            curie_core::Error::Capacity { .. } => CliError::Capacity {
                context: "capacity".into(),
                source: e,
            },
            other => CliError::Core(other),
        }
    }
}

impl CliError {
    /// Attach context (e.g. the offending system size) to capacity errors.
    pub fn context(self, ctx: impl FnOnce() -> String) -> Self {
        match self {
            CliError::Capacity { source, .. } => CliError::Capacity {
                context: ctx(),
                source,
            },
            other => other,
        }
    }

    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::ChecksFailed(_) => ExitCode::from(2),
            CliError::Capacity { .. } => ExitCode::from(3),
            _ => ExitCode::from(1),
        }
    }
}
