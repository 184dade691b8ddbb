use thiserror::Error;

/// Every failure the engine can report.
///
/// `NotPIntegral` is special: the theory guarantees integrality wherever the
/// engine divides by factorials, so seeing it means a bug upstream.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("p^m = {p}^{m} exceeds the supported bound 2^20")]
    LevelTooLarge { p: u64, m: u32 },
    #[error("coefficient {0} is not p-integral")]
    NotPIntegral(String),
    #[error("parameter `{0}` is not bound")]
    UnboundParameter(String),
    #[error("{0} is not invertible")]
    NotInvertible(String),
    #[error("operation not supported over {0}")]
    UnsupportedRing(String),
    #[error("pole at specialization {0}")]
    PoleAtSpecialization(String),
    #[error("truncation degree {have} is too small, need at least {need}")]
    TruncationTooSmall { have: u32, need: u32 },
    #[error("filtration index {k} lies outside the safe band [0, {max}]")]
    BandViolation { k: u32, max: u32 },
    #[error("series iteration did not stabilize to precision {0}")]
    PrecisionUnreachable(u32),
    #[error("unsupported group kind: {0}")]
    UnsupportedKind(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
