use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{element} is not a member of {subset}")]
    NotAMember { element: usize, subset: String },

    #[error("integer overflow computing {0}")]
    Overflow(String),

    #[error("network is not resolvable: {0}")]
    NotResolvable(String),

    #[error("invalid topology: {0}")]
    InvalidTopology(String),

    #[error("storage M = {m} is not on the grid of multiples of {step}")]
    GridViolation { m: String, step: String },

    #[error("file size of {bytes} bytes is not divisible by the required {divisor} bytes")]
    Subpacketization { bytes: usize, divisor: usize },

    #[error("incomplete reception: no signal from relay {relay}")]
    IncompleteReception { relay: usize },

    #[error("demand mismatch: {0}")]
    DemandMismatch(String),

    #[error("erasure code shape mismatch: {0}")]
    CodeShape(String),

    #[error("decode failure: {0}")]
    Decode(String),

    #[error("exhaustive verification needs N^K <= {cap} demand vectors, got {requested}")]
    ExhaustiveCap { cap: u64, requested: String },

    #[error("{0}")]
    Format(String),
}
