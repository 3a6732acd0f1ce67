use thiserror::Error;

/// Errors shared by every module in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("probability {value} at index {index} is negative")]
    NegativeProbability { index: usize, value: f64 },
    #[error("probabilities sum to {sum}, expected 1 within {tolerance}")]
    SumNotOne { sum: f64, tolerance: f64 },
    #[error("duplicate label {label:?}")]
    DuplicateLabel { label: String },
    #[error("{weights} weights but {labels} labels")]
    LengthMismatch { weights: usize, labels: usize },
    #[error("self-information requires p > 0, got {p}")]
    NonPositiveProbability { p: f64 },
    #[error("outcome space must contain at least one state")]
    ZeroStates,
    #[error("density does not integrate to 1 (got {mass})")]
    NotNormalized { mass: f64 },

    #[error("channel column {column} sums to {sum}, expected 1")]
    ColumnSumNotOne { column: usize, sum: f64 },
    #[error("negative matrix entry {value} at row {row}, column {column}")]
    NegativeEntry { row: usize, column: usize, value: f64 },
    #[error("matrix is empty or not rectangular")]
    BadShape,
    #[error("space mismatch: {context}")]
    SpaceMismatch { context: String },
    #[error("marginal probability of {label:?} is zero")]
    ZeroMarginal { label: String },
    #[error("unknown label {label:?}")]
    UnknownLabel { label: String },

    #[error("size cap exceeded: {need} > {cap} ({context})")]
    SizeCapExceeded { need: u128, cap: u128, context: String },
    #[error("search space of {arrangements} arrangements exceeds cap {cap}")]
    SearchSpaceTooLarge { arrangements: u128, cap: u128 },

    #[error("repetition count {got} must be odd for majority decoding")]
    EvenRepetition { got: usize },
    #[error("{name} = {value} outside [{min}, {max}]")]
    OutOfRange {
        name: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },
    #[error("bit stream ends mid-codeword after {decoded} symbols")]
    TrailingBits { decoded: usize },
    #[error("symbol {label:?} not present in the codebook")]
    UnknownSymbol { label: String },
    #[error("codeword {codeword:?} is a prefix of {other:?}")]
    NotPrefixFree { codeword: String, other: String },
    #[error("invalid bit character {found:?} at position {position}")]
    InvalidBit { found: char, position: usize },

    #[error("unknown figure id {id:?}")]
    UnknownFigure { id: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn space_mismatch(context: impl Into<String>) -> Self {
        Error::SpaceMismatch {
            context: context.into(),
        }
    }
}
