use thiserror::Error;

/// Errors raised by the simulator and the measurement procedures.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum AdcError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("non-finite input sample at index {index}")]
    NonFinite { index: usize },

    #[error("empty input")]
    EmptyInput,

    #[error("ragged pixel streams: stream {index} has {len} samples, expected {expected}")]
    RaggedStreams {
        index: usize,
        len: usize,
        expected: usize,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("tone frequency {fin} Hz is not below Nyquist ({nyquist} Hz)")]
    AboveNyquist { fin: f64, nyquist: f64 },

    #[error("insufficient code coverage: mean of {mean_hits:.1} hits per interior code, need at least {required}")]
    InsufficientCoverage { mean_hits: f64, required: usize },

    #[error("record has no fundamental (constant input)")]
    NoFundamental,
}

pub type Result<T, E = AdcError> = std::result::Result<T, E>;
