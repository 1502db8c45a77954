use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("empty permutation")]
    Empty,
    #[error("duplicate value {0}")]
    DuplicateValue(u64),
    #[error("value {value} out of range 1..={n}")]
    OutOfRange { value: u64, n: usize },
    #[error("missing value {0}")]
    MissingValue(u64),
    #[error("cannot parse permutation {input:?}: {reason}")]
    Parse { input: String, reason: String },

    #[error("pop did not reach the identity within {cap} passes (n = {n})")]
    IterationCap { n: usize, cap: usize },
    #[error(
        "decreasing run of length {length} at position {start} before sort {transition} \
         (runs after the first sort have length at most 3)"
    )]
    LongRun {
        transition: usize,
        start: usize,
        length: usize,
    },
    #[error("transition index must be at least 1")]
    ZeroTransition,
    #[error("value {0} does not occur in the permutation")]
    UnknownValue(u32),
    #[error("position {position} out of range 1..={n}")]
    PositionOutOfRange { position: usize, n: usize },

    #[error("the identity permutation has no applicable bound")]
    IdentityInput,
    #[error("n = {n} exceeds the exhaustive cap {cap}; use sampling instead")]
    AboveExhaustiveCap { n: usize, cap: usize },
    #[error("unknown window id {0:?}")]
    UnknownWindow(String),
    #[error("unknown claim id {0:?}")]
    UnknownClaim(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
