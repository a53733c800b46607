use thiserror::Error;

/// Errors produced by the thresholding pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("image dimensions must be positive, got {width}x{height}")]
    InvalidDimensions { width: usize, height: usize },

    #[error("dimension mismatch: expected {expected} samples, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("gray value {value} at index {index} is outside [0, 255]")]
    ValueOutOfRange { value: i64, index: usize },

    #[error("levy stability index beta must lie in (0, 2), got {0}")]
    InvalidBeta(f64),

    #[error("levy step scale alpha must be positive and finite, got {0}")]
    InvalidAlpha(f64),

    #[error("at most 255 thresholds fit in an 8-bit gray range, requested {0}")]
    TooManyLevels(usize),

    #[error("cannot repair {0} values into distinct thresholds in [1, 255]")]
    Unrepairable(usize),

    #[error("a threshold set needs at least one threshold")]
    EmptyThresholds,

    #[error("invalid threshold set: {0}")]
    InvalidThresholds(String),

    #[error("degenerate image: {0} has zero gray-level variance, correlation is undefined")]
    DegenerateImage(&'static str),

    #[error("invalid search parameters: {0}")]
    InvalidParams(String),

    #[error("invalid arguments: {0}")]
    InvalidArgs(String),

    #[error(
        "exhaustive search over C({candidates},{levels}) = {count} threshold tuples exceeds the \
         limit of {limit} (full 8-bit search space C(256,{levels}) = {full_space})"
    )]
    TooLarge {
        candidates: usize,
        levels: usize,
        count: String,
        limit: u64,
        full_space: String,
    },

    #[error("bad PGM magic number, expected P2 or P5")]
    BadMagic,

    #[error("unsupported PGM maxval {0}, only 255 is accepted")]
    UnsupportedMaxval(u64),

    #[error("PGM raster truncated: expected {expected} samples, found {found}")]
    TruncatedData { expected: usize, found: usize },

    #[error("malformed PGM header: {0}")]
    MalformedHeader(String),

    #[error("malformed report: {0}")]
    MalformedReport(String),
}

impl Error {
    /// True when the failure is caused by a constant-valued input image.
    pub fn is_degenerate(&self) -> bool {
        matches!(self, Error::DegenerateImage(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
