//! Error type shared across the crate.

use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum DppError {
    #[error("pivot {index} out of range: conditional probability {value} outside [-tol, 1+tol]")]
    PivotOutOfRange { index: usize, value: f64 },

    #[error("pivot {index} has non-real value: |imag| = {imag}")]
    NonRealPivot { index: usize, imag: f64 },

    #[error("i/o failure: {0}")]
    Io(String),

    #[error("conditioning on a probability-zero event: eliminated pivot {index} has magnitude {magnitude}")]
    SingularConditioning { index: usize, magnitude: f64 },

    #[error("zero pivot at index {index} during factorization")]
    ZeroPivot { index: usize },

    #[error("negative diagonal {value} at index {index}: kernel is not a projection")]
    NegativeDiagonal { index: usize, value: f64 },

    #[error("remaining diagonal mass {mass} degenerate before {drawn} of {rank} pivots drawn")]
    DegenerateMass { drawn: usize, rank: usize, mass: f64 },

    #[error("eigenvalue {value} outside [0, 1] for a Hermitian marginal kernel")]
    SpectrumOutOfRange { value: f64 },

    #[error("graph is disconnected; spanning-tree kernel undefined")]
    DisconnectedGraph,

    #[error("Kasteleyn matrix is singular; orientation construction is broken")]
    SingularKasteleyn,

    #[error("sigma = {sigma} outside (0, 1]")]
    InvalidSigma { sigma: f64 },

    #[error("L-ensemble kernel has eigenvalue {value} < 0")]
    IndefiniteL { value: f64 },

    #[error("ground set of size {n} too large for exhaustive enumeration (max {max})")]
    TooLarge { n: usize, max: usize },

    #[error("malformed sparse matrix: {0}")]
    MalformedSparse(String),

    #[error("numeric fill at (row {row}, col {col}) outside the symbolic pattern")]
    StructureMismatch { row: usize, col: usize },

    #[error("invalid kernel: {0}")]
    InvalidKernel(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, DppError>;

impl From<std::io::Error> for DppError {
    fn from(e: std::io::Error) -> Self {
        DppError::Io(e.to_string())
    }
}
