use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("rate vector is empty")]
    EmptyRates,

    #[error("rate #{index} is {value}; rates must be strictly positive")]
    NonPositiveRate { index: usize, value: f64 },

    #[error("non-finite input: {what} = {value}")]
    NonFiniteInput { what: &'static str, value: f64 },

    #[error("threshold t = {0} must be strictly positive")]
    NonPositiveThreshold(f64),

    #[error("order n = {0} is invalid; n must be at least 1")]
    InvalidOrder(u32),

    #[error("argument x = {0} must be finite and non-negative")]
    InvalidArgument(f64),

    #[error("n^(n+1/2) e^(1-n) overflows f64 for n = {0}")]
    Overflow(u32),

    #[error("rates #{first} and #{second} are equal ({value}); the closed form needs distinct rates")]
    DuplicateRates { first: usize, second: usize, value: f64 },

    #[error("extended precision needs at least 30 decimal digits, got {0}")]
    InsufficientPrecision(u32),

    #[error("matrix is {rows}x{cols}; a square matrix is required")]
    NonSquare { rows: usize, cols: usize },

    #[error("matrix has a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("expected {expected} values, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("sample size must be at least 1")]
    InvalidSampleSize,

    #[error("K = {0} independent runs requested; at least 2 are needed for a standard deviation")]
    InvalidTrialCount(usize),

    #[error("all {0} samples were rejected; the second-moment ratio is undefined")]
    AllSamplesRejected(u64),

    #[error("I/O failure: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}
