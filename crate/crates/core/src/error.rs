use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A parameter is outside its admissible range.
    #[error("invalid `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },

    #[error("infeasible topology for L={size}, degree={degree}: {reason}")]
    InfeasibleTopology {
        size: usize,
        degree: usize,
        reason: String,
    },

    /// Game configuration and population structure disagree.
    #[error("configuration mismatch: {0}")]
    ConfigMismatch(String),

    #[error("threshold M={threshold} exceeds match size {match_size}")]
    ThresholdExceedsMatch { threshold: usize, match_size: usize },

    /// The cooperation curve never crosses the transition level.
    #[error("no downward crossing of {level} in the cooperation curve: {reason}")]
    NoCrossing { level: f64, reason: String },

    #[error("target alpha_crit {target:.4} outside the searchable range: {reason}")]
    OutOfRange { target: f64, reason: String },

    #[error("degenerate variance: {0}")]
    DegenerateVariance(String),

    #[error("malformed edge list at line {line}: {reason}")]
    EdgeList { line: usize, reason: String },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            field,
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
