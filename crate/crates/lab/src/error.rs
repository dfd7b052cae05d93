use std::path::PathBuf;

use crate::config::ConfigError;

#[derive(Debug, thiserror::Error)]
pub enum LabError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Numerical(#[from] pmelab_core::Error),
    #[error("regime violation: {0}")]
    Regime(String),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}: {message}", path.display())]
    Format { path: PathBuf, message: String },
}

impl LabError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }

    /// 2 for configuration problems, 3 for numerical failures, 4 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) | Self::Numerical(pmelab_core::Error::Config(_)) => 2,
            Self::Numerical(_) | Self::Regime(_) => 3,
            Self::Io { .. } | Self::Format { .. } => 4,
        }
    }
}

pub type LabResult<T> = Result<T, LabError>;
