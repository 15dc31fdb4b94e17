use alloc::string::String;

/// Errors raised anywhere in the core crate.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("{0} is not a prime below 2^31")]
    NotPrime(u64),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("division by zero")]
    DivByZero,
    #[error("duplicate abscissa {0}")]
    DuplicateAbscissa(u32),
    #[error("singular matrix")]
    SingularMatrix,
    #[error("{erasures} erasures exceed the limit {limit}")]
    TooManyErasures { erasures: usize, limit: usize },
    #[error("ambiguous decoding: two codewords within the correction radius")]
    AmbiguousDecoding,
    #[error("backend {backend} does not support gate {gate}")]
    UnsupportedGate { backend: &'static str, gate: &'static str },
    #[error("state of {0} amplitudes exceeds the size limit")]
    SizeLimit(u64),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("need {need} shares, have {have}")]
    InsufficientShares { need: usize, have: usize },
    #[error("adversary touched wire {wire} not owned by a corrupted player")]
    ContractViolation { wire: usize },
    #[error("fewer than {need} usable branches for recovery")]
    RecoveryFailed { need: usize },
}

pub type Result<T> = core::result::Result<T, Error>;
