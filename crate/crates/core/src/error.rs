use thiserror::Error;

/// Errors reported by the sequence, series and continued-fraction routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("index must be at least 1 (the coefficient series starts at n = 1)")]
    ZeroIndex,

    #[error("coefficient of x^{index} is not determined by a truncation at degree {cap}")]
    BeyondTruncation { index: u64, cap: u64 },

    #[error("base must be ≥ 2, got {0}")]
    BaseTooSmall(i128),

    #[error("Fermat index {index} exceeds the configured cap {cap}")]
    FermatIndexTooLarge { index: u32, cap: u32 },

    #[error("Liouville depth must lie in 1..=8, got {0}")]
    LiouvilleDepth(u32),

    #[error("enclosure is inverted: lo > hi")]
    InvertedEnclosure,

    #[error("scale factor must be positive")]
    NonPositiveScale,

    #[error("continued fraction is empty")]
    EmptyContinuedFraction,

    #[error("partial quotient a_{index} must be ≥ 1")]
    NonPositiveQuotient { index: usize },

    #[error("window too short: {quotients} quotients, need at least {needed} for window start {window_start}")]
    WindowTooShort {
        quotients: usize,
        needed: usize,
        window_start: usize,
    },

    #[error("denominator q_{window_start} = {denominator} has zero logarithm; move the window start past it")]
    DegenerateWindow {
        window_start: usize,
        denominator: String,
    },

    #[error(
        "only {got} certified quotients after {terms} terms (wanted {wanted}); depth cap reached"
    )]
    InsufficientQuotients {
        got: usize,
        wanted: usize,
        terms: u64,
    },

    #[error("cannot parse {what}: {input:?}")]
    Parse { what: &'static str, input: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
