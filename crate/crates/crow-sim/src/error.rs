use std::path::PathBuf;

use thiserror::Error;

/// Failures of a `crowsim` invocation, grouped by exit status.
#[derive(Debug, Error)]
pub enum SimError {
    #[error("config error: {0}")]
    Config(String),
    #[error("{path}:{line}:{column}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("dimension error in {path}: {message}")]
    Dimension { path: PathBuf, message: String },
    #[error("engine error: {0}")]
    Engine(#[from] crow_core::Error),
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl SimError {
    /// 1 for configuration problems, 2 for numerical failures, 3 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            SimError::Config(_) | SimError::Parse { .. } | SimError::Dimension { .. } => 1,
            SimError::Engine(_) => 2,
            SimError::Io { .. } => 3,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        SimError::Io {
            path: path.into(),
            source,
        }
    }
}

pub type SimResult<T> = Result<T, SimError>;
