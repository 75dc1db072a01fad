use thiserror::Error;

/// Errors raised by the algebra, cohomology and checker layers.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("unknown generator index {0}")]
    UnknownGenerator(usize),
    #[error("element is defined over {found} generators, expected {expected}")]
    MismatchedGenerators { expected: usize, found: usize },
    #[error("element is not homogeneous")]
    NotHomogeneous,
    #[error("cohomology window must be positive, got {0}")]
    InvalidWindow(i64),
    #[error("degree {degree} lies outside the computed window 0..={window}")]
    OutsideWindow { degree: u32, window: u32 },
    #[error("class coordinates at degree {degree} have length {found}, expected {expected}")]
    BadCoordinates {
        degree: u32,
        expected: usize,
        found: usize,
    },
    #[error("class representatives were not computed for degree {0}")]
    MissingRepresentatives(u32),
    #[error("observed formal dimension {0} is odd")]
    OddFormalDimension(u32),
    #[error("observed formal dimension {observed} does not equal 2*{half}")]
    HalfDimensionMismatch { observed: u32, half: u32 },
    #[error("model is not odd-generated")]
    NotOddGenerated,
    #[error("tower stage {stage} out of range 1..={len}")]
    StageOutOfRange { stage: usize, len: usize },
    #[error("element {index} is not a cocycle")]
    NotACocycle { index: usize },
    #[error("Betti sequence has length {found}, expected {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("formal dimension must be at least 2, got {0}")]
    FormalDimensionTooSmall(u32),
    #[error("malformed reference row: {0}")]
    MalformedRow(String),
    #[error("unknown corpus model `{0}`")]
    UnknownModel(String),
    #[error("invalid parameters for `{name}`: {reason}")]
    InvalidParameters { name: String, reason: String },
}

pub type Result<T, E = AlgebraError> = std::result::Result<T, E>;
