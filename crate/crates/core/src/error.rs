// SPDX-License-Identifier: MIT OR Apache-2.0

use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("length {0} is not a power of two")]
    NotDyadic(usize),
    #[error("primary level {primary_level} too deep for a grid of side {side}")]
    LevelTooDeep { primary_level: u32, side: usize },
    #[error("unsupported wavelet: {0}")]
    UnsupportedWavelet(String),
    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("coefficient layout does not match the transform")]
    LayoutMismatch,
    #[error("need at least {required} observed points, got {actual}")]
    TooFewObserved { required: usize, actual: usize },
    #[error("observed index {0} is out of range or not strictly increasing")]
    BadIndex(usize),
    #[error("finest detail level is empty")]
    EmptyFinestLevel,
    #[error("threshold radicand is not positive for N = {0}")]
    NonPositiveRadicand(usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("operation is not supported: {0}")]
    Unsupported(String),
    #[error("infeasible missingness: {0}")]
    InfeasibleMissing(String),
    #[error("baseline value is zero")]
    ZeroBaseline,
    #[error("need at least {required} replicates per group, got {actual}")]
    InsufficientReplicates { required: usize, actual: usize },
    #[error("shrinker failed on replicate {replicate}: {source}")]
    Replicate {
        replicate: usize,
        source: alloc::boxed::Box<Error>,
    },
    #[error("replicate {replicate}, algorithm {algorithm}: {source}")]
    Scenario {
        replicate: usize,
        algorithm: String,
        source: alloc::boxed::Box<Error>,
    },
    #[error("iteration diverged after {0} steps")]
    Diverged(usize),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
