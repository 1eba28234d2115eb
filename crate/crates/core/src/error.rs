use alloc::string::String;

/// Errors produced by the audit core.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("n_bits = {n_bits} is outside the supported range 1..={max}")]
    BitLength { n_bits: u32, max: u32 },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("probability vector has {got} entries, expected {expected}")]
    Length { expected: usize, got: usize },

    #[error("index {index} does not fit in {n_bits} bits")]
    IndexOutOfRange { index: u64, n_bits: u32 },

    #[error("negative probability {value} at index {index}")]
    NegativeProbability { index: u64, value: f64 },

    #[error("probabilities sum to {sum}, not 1")]
    NotNormalized { sum: f64 },

    #[error("invalid subset: {0}")]
    InvalidSubset(String),

    #[error("revealed values have zero probability under the distribution")]
    InconsistentRevelation,

    #[error("parameter `{name}` = {value} is outside {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("matrix is not a valid density operator: {0}")]
    InvalidDensityOperator(String),

    #[error("invalid POVM: {0}")]
    InvalidPovm(String),

    #[error("measurement produced probability {value} for outcome {outcome}")]
    UnphysicalOutcome { outcome: usize, value: f64 },

    #[error("ensemble is empty")]
    EmptyEnsemble,

    #[error("invalid hash: {0}")]
    InvalidHash(String),

    #[error("no full-rank matrix found after {attempts} draws")]
    RankDeficient { attempts: u32 },

    #[error("invalid protocol configuration: {0}")]
    InvalidConfig(String),

    #[error("sweep point {index} failed: {source}")]
    SweepPoint {
        index: usize,
        #[source]
        source: alloc::boxed::Box<Error>,
    },

    #[error("no sifted bits in run")]
    NoSiftedBits,
}

pub type Result<T> = core::result::Result<T, Error>;
