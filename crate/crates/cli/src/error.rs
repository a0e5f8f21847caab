use std::path::PathBuf;

use benchrank_core::{DatasetError, RankingError, ScoreError, StatsError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {source}", .path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Dataset(#[from] DatasetError),
    #[error(transparent)]
    Ranking(#[from] RankingError),
    #[error(transparent)]
    Score(#[from] ScoreError),
    #[error(transparent)]
    Stats(#[from] StatsError),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    /// 2: I/O, 3: format or validation, 4: statistical degeneracy.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } => 2,
            CliError::Usage(_) | CliError::Dataset(_) | CliError::Ranking(_) | CliError::Score(_) => 3,
            CliError::Stats(StatsError::Degenerate) => 4,
            CliError::Stats(_) => 3,
        }
    }
}
