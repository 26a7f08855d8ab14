use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} exceeds the dense-representation cap {1}")]
    ExceedsCap(u64, u64),
    #[error("element {0} out of range for modulus {1}")]
    OutOfRange(u64, u64),
    #[error("operands belong to different fields (p={0} vs p={1})")]
    FieldMismatch(u64, u64),
    #[error("set must be non-empty")]
    EmptySet,
    #[error("element {0} is not a member of the set")]
    NotAMember(u64),
    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),
    #[error("no witness found after {samples} samples")]
    WitnessNotFound { samples: u64 },
    #[error("set contains 0; it must be removed before this operation")]
    ZeroInSet,
    #[error("a*A \u{2229} b0*A unexpectedly empty for a={0}")]
    EmptyIntersection(u64),
    #[error("invalid family: {0}")]
    InvalidFamily(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
