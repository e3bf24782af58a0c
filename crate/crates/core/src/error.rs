use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("ring digraphs need at least 3 vertices, got {0}")]
    RingTooSmall(usize),

    #[error("mask has length {found}, expected {expected}")]
    MaskLength { expected: usize, found: usize },

    #[error("mask character {0:?} is not '0' or '1'")]
    MaskChar(char),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("matrix is not square or has inconsistent rows")]
    NotSquare,

    #[error("matrix rows do not sum to zero (row {row})")]
    NotLaplacian { row: usize },

    #[error("root at {re}{im:+}i is numerically ambiguous between real and non-real")]
    Ambiguous { re: f64, im: f64 },

    #[error("root finder did not converge after {iterations} iterations")]
    NotConverged { iterations: usize },

    #[error("no sign change of the discriminant found on (0, {upper}]")]
    NoSignChange { upper: f64 },

    #[error("step {step} exceeds the stability limit {limit}")]
    StepTooLarge { step: f64, limit: f64 },
}
