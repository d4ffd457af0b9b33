use thiserror::Error;

/// Every failure the library can report. Messages are stable: the CLI prints
/// them verbatim and tests match on them.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("not prime: {0}")]
    NotPrime(u64),
    #[error("gcd of zeros")]
    GcdOfZeros,
    #[error("transition matrix not invertible")]
    NotInvertible,
    #[error("map does not respect relations")]
    IllDefinedMap,
    #[error("ring mismatch")]
    RingMismatch,
    #[error("field mismatch")]
    FieldMismatch,
    #[error("dimension mismatch: {0}")]
    Shape(String),
    #[error("increase window")]
    IncreaseWindow,
    #[error("not totally global")]
    NotTotallyGlobal,
    #[error("not in atom span")]
    NotInAtomSpan,
    #[error("action not k-central")]
    NotCentral,
    #[error("sequence not exact: {0}")]
    NotExact(String),
    #[error("colimit did not stabilize")]
    NoStabilization,
    #[error("not coherent: {0}")]
    NotCoherent(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("internal: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
