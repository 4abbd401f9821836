use thiserror::Error;

/// Errors raised by the core library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("digit measures sum to {sum}, not 1")]
    SumNotOne { sum: String },

    #[error("a digit system needs at least 2 digits, got {0}")]
    TooFewDigits(usize),

    #[error("at most 256 digits are supported, got {0}")]
    TooManyDigits(usize),

    #[error("digit {index} has non-positive measure {value}")]
    NonPositiveMeasure { index: usize, value: String },

    #[error("digit {digit} is out of range for a {digits}-digit system")]
    DigitOutOfRange { digit: usize, digits: usize },

    #[error("count {value} at position {index} is negative")]
    NegativeCount { index: usize, value: i64 },

    #[error("expected a vector of length {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("epsilon {0} is outside the admissible range")]
    EpsilonOutOfRange(String),

    #[error("point lies off the hyperplane segment (M = {m})")]
    OffSegment { m: f64 },

    #[error("requested {requested} rows, cap is {cap}")]
    BudgetExceeded { requested: u128, cap: u128 },

    #[error("the Taylor box around the maximizer leaves the positive orthant (min coordinate {min_coordinate})")]
    BoxOutsideDomain { min_coordinate: f64 },

    #[error("direction vector is zero")]
    DegenerateDirection,

    #[error("direction is not parallel to the hyperplane (residual {residual})")]
    NotParallel { residual: f64 },

    #[error("the query word must be non-empty")]
    EmptyWord,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid rational `{0}`")]
    InvalidRational(String),

    #[error("duplicate digit symbol `{0}`")]
    DuplicateSymbol(String),

    #[error("unknown digit symbol `{0}`")]
    UnknownSymbol(String),
}

pub type Result<T> = std::result::Result<T, Error>;
