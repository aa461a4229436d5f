use std::path::PathBuf;

use thiserror::Error;

use crate::dataset::LoadError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Load(#[from] LoadError),
    #[error(transparent)]
    Core(#[from] biaspca::Error),
    #[error("{0}")]
    Usage(String),
    #[error("cannot read baseline {path}: {source}")]
    BaselineRead {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    /// Process exit status; 2 is reserved for argument errors reported by clap.
    pub fn exit_code(&self) -> i32 {
        use biaspca::Error as E;
        match self {
            CliError::Usage(_) => 2,
            CliError::Load(LoadError::FileNotFound(_)) => 3,
            CliError::Load(LoadError::ParseError { .. }) => 4,
            CliError::Load(LoadError::EmptyDataset) => 5,
            CliError::Load(LoadError::MissingColumn { .. } | LoadError::RaggedRow { .. }) => 6,
            CliError::Load(LoadError::InvalidColumns(_)) => 2,
            CliError::Load(LoadError::Io { .. }) => 7,
            CliError::Load(LoadError::Data(e)) | CliError::Core(e) => match e {
                E::InvalidData(_) | E::DimensionMismatch { .. } | E::NotSymmetric { .. } => 6,
                E::ZeroRank | E::RankRequestTooLarge { .. } | E::InvalidProblem(_) => 8,
                E::InvalidEpsilon(_) | E::InvalidBias(_) | E::DegenerateDirection => 9,
                E::NonConvergence { .. } => 10,
                E::BudgetExceeded { .. } => 11,
                E::MalformedBaselineFile { .. } => 12,
            },
            CliError::BaselineRead { .. } => 12,
            CliError::Write { .. } => 13,
        }
    }
}
