//! Error type shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, got {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("non-finite value in {context}")]
    NonFinite { context: &'static str },

    #[error("{context} must not be empty")]
    Empty { context: &'static str },

    #[error("space failed validation: {0}")]
    InvalidSpace(String),

    #[error("basis has {have} vectors but the space has dimension {need}")]
    BasisNotFull { have: usize, need: usize },

    #[error("operator is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("operator is not hermitian (relative defect {defect:.3e})")]
    NotHermitian { defect: f64 },

    #[error("requested count {requested} outside 1..={max}")]
    CountOutOfRange { requested: usize, max: usize },

    #[error("tolerance must be positive and finite, got {0}")]
    BadTolerance(f64),

    #[error("kept {axis} count {given} outside 1..={max}")]
    TruncationOutOfRange {
        axis: &'static str,
        given: usize,
        max: usize,
    },

    #[error("grid lower bound {lower} is not below upper bound {upper}")]
    BadGridBounds { lower: f64, upper: f64 },

    #[error("trapezoid rule needs at least 2 points, got {points}")]
    TooFewPoints { points: usize },

    #[error("kernel evaluated at coincident points x = {x}")]
    CoincidentPoints { x: f64 },

    #[error("source and receiver intervals must be disjoint with a positive gap")]
    OverlappingIntervals,

    #[error("wavenumber must be positive and finite, got {0}")]
    BadWavenumber(f64),

    #[error("sample shape {rows}x{cols} does not match grids {expected_rows}x{expected_cols}")]
    SampleShapeMismatch {
        rows: usize,
        cols: usize,
        expected_rows: usize,
        expected_cols: usize,
    },

    #[error("cannot access kernel file {path}: {source}")]
    KernelFileIo {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed kernel file {path}: {reason}")]
    MalformedKernelFile { path: String, reason: String },

    #[error("kernel file {path} declares {expected} samples but contains {found}")]
    SampleCountMismatch {
        path: String,
        expected: usize,
        found: usize,
    },

    #[error("empty decomposition has no factored form")]
    EmptyDecomposition,
}
