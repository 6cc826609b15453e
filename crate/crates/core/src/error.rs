use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unsupported simplex dimension {0} (expected 3 or 4 barycentric coordinates)")]
    UnsupportedDimension(usize),
    #[error("integer overflow computing combinatorial coefficient at degree {0}")]
    Overflow(usize),
    #[error("degree {0} exceeds the supported maximum of {1}")]
    DegreeTooHigh(usize, usize),
    #[error("degenerate simplex (|det| = {0:e})")]
    DegenerateSimplex(f64),
    #[error("barycentric coordinates sum to {0}, expected 1")]
    NotNormalized(f64),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("invalid patch: {0}")]
    InvalidPatch(String),
    #[error("matrix is not symmetric (relative asymmetry {0:e})")]
    NotSymmetric(f64),
    #[error("matrix contains non-finite entries")]
    NonFinite,
    #[error("{0} did not converge after {1} sweeps")]
    NoConvergence(&'static str, usize),
    #[error("matrix is degenerate: {0}")]
    DegenerateMatrix(&'static str),
    #[error("combination cancels to a vector of norm {0:e}")]
    Cancellation(f64),
    #[error("implicit gradient vanishes at the query point")]
    SingularPoint,
    #[error("inputs refer to different reference tetrahedra")]
    SimplexMismatch,
    #[error("implicit degree mismatch: {0} vs {1}")]
    ImplicitDegreeMismatch(usize, usize),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
