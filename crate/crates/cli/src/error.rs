use std::io;
use std::path::PathBuf;

use qwalk::Error as CoreError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] CoreError),

    #[error("{path}: {source}")]
    File { path: PathBuf, source: io::Error },

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error("malformed input: {0}")]
    Data(String),

    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn file(path: impl Into<PathBuf>, source: io::Error) -> Self {
        CliError::File {
            path: path.into(),
            source,
        }
    }

    /// 2 for usage and parameter errors, 3 when a selection or conditioning
    /// has nothing to work with, 4 for IO and malformed files.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(
                CoreError::EmptySelection { .. }
                | CoreError::ZeroConditioningProbability { .. }
                | CoreError::NoDetection { .. }
                | CoreError::EmptyAdmissibleSet,
            ) => 3,
            CliError::Core(_) | CliError::Usage(_) => 2,
            CliError::File { .. }
            | CliError::Io(_)
            | CliError::Csv(_)
            | CliError::Json(_)
            | CliError::Data(_) => 4,
        }
    }
}
