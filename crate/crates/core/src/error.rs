use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid interval: {0}")]
    InvalidInterval(String),

    #[error("{}:{line}: {message}", file.display())]
    Parse {
        file: PathBuf,
        line: u64,
        message: String,
    },

    #[error("cannot compute {bins} bins for attribute `{attribute}`: {reason}")]
    Binning {
        attribute: String,
        bins: usize,
        reason: String,
    },

    #[error("duplicate resident id `{0}` in household merge")]
    DuplicateResident(String),

    #[error("dimension mismatch in {op}: {left} vs {right}")]
    Dimension {
        op: &'static str,
        left: String,
        right: String,
    },

    #[error("svd did not converge after {sweeps} sweeps (residual {residual:e})")]
    SvdNoConvergence { sweeps: usize, residual: f64 },

    #[error("non-finite matrix entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("item `{0}` is not in the group's item set")]
    UnknownItem(String),

    #[error("residents without preferences or requests: {}", .0.join(", "))]
    NoCandidates(Vec<String>),

    #[error("not a conflict: {0}")]
    NotAConflict(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("temporal proximity needs at least one interval")]
    EmptyIntervalSet,

    #[error("intervals {0} and {1} do not overlap")]
    NoOverlap(String, String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn parse(file: impl Into<PathBuf>, line: u64, message: impl Into<String>) -> Self {
        Error::Parse {
            file: file.into(),
            line,
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Whether the error stems from bad input data rather than an internal fault.
    pub fn is_data_error(&self) -> bool {
        !matches!(self, Error::SvdNoConvergence { .. })
    }
}
