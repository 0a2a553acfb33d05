// SPDX-License-Identifier: MIT OR Apache-2.0

use std::path::PathBuf;
use std::process::ExitCode;

use wavesc_core::Error as CoreError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Numerical(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] CoreError),
}

pub type CliResult<T> = Result<T, CliError>;

impl CliError {
    pub fn input(msg: impl Into<String>) -> Self {
        Self::Input(msg.into())
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }

    /// 2 for bad input, 3 for numerical failure.
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(if self.is_numerical() { 3 } else { 2 })
    }

    fn is_numerical(&self) -> bool {
        match self {
            Self::Numerical(_) => true,
            Self::Input(_) | Self::Io { .. } => false,
            Self::Core(e) => core_is_numerical(e),
        }
    }
}

fn core_is_numerical(e: &CoreError) -> bool {
    match e {
        CoreError::EmptyFinestLevel
        | CoreError::NonPositiveRadicand(_)
        | CoreError::ZeroBaseline
        | CoreError::Diverged(_) => true,
        CoreError::Replicate { source, .. } | CoreError::Scenario { source, .. } => {
            core_is_numerical(source)
        }
        _ => false,
    }
}
