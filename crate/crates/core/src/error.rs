use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, CdpError>;

#[derive(Debug, Error)]
pub enum CdpError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unknown dataset kind `{0}`")]
    UnknownKind(String),

    #[error("{0}: no data rows")]
    EmptyInput(String),

    #[error("row {row}: expected {expected} columns, found {found}")]
    RaggedRow {
        row: usize,
        expected: usize,
        found: usize,
    },

    #[error("row {row}, column {column}: {message}")]
    BadValue {
        row: usize,
        column: usize,
        message: String,
    },

    #[error("points {i} and {j} coincide (zero Euclidean distance)")]
    DuplicatePoints { i: usize, j: usize },

    #[error("coordinate {coordinate} has zero variance and cannot be standardized")]
    ZeroVariance { coordinate: usize },

    #[error("graph is disconnected ({components} components); reduce to the giant component first")]
    Disconnected { components: usize },

    #[error("vertex {target} is unreachable from {from}")]
    Unreachable { from: usize, target: usize },

    #[error("no admissible pairs at tau = {tau}")]
    NoAdmissiblePairs { tau: f64 },

    #[error("matrix is not symmetric (max asymmetry {asymmetry:e})")]
    NonSymmetric { asymmetry: f64 },

    #[error("projected edge ({u}, {v}) has zero length")]
    CollapsedEdge { u: usize, v: usize },

    #[error("spectrum has zero total mass")]
    ZeroSpectrum,

    #[error("missing artifact: {0}")]
    MissingArtifact(PathBuf),

    #[error("malformed artifact {path}: {message}")]
    MalformedArtifact { path: PathBuf, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl CdpError {
    /// Process exit code used by the command-line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            CdpError::NoAdmissiblePairs { .. } => 3,
            CdpError::InvalidParameter(_)
            | CdpError::UnknownKind(_)
            | CdpError::DuplicatePoints { .. }
            | CdpError::ZeroVariance { .. }
            | CdpError::Disconnected { .. }
            | CdpError::NonSymmetric { .. }
            | CdpError::CollapsedEdge { .. }
            | CdpError::ZeroSpectrum => 2,
            _ => 1,
        }
    }
}
