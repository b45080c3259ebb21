use thiserror::Error;

/// Errors raised by the algebra, code construction and decoding layers.
///
/// Decoding failures are not errors: they are reported as values in
/// [`crate::decoder::DecodeOutcome`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid ring parameters: {0}")]
    InvalidParams(String),
    #[error("element is not a unit")]
    NonUnit,
    #[error("zero has no valuation decomposition")]
    ZeroInput,
    #[error("modulus polynomial is reducible modulo p")]
    ReducibleModulus,
    #[error("no irreducible modulus found after {0} attempts")]
    ModulusSearchExhausted(usize),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("linear system has no solution")]
    Inconsistent,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("requested support dimension {t} exceeds code length {n}")]
    ImpossibleSupport { t: usize, n: usize },
    #[error("rejection sampling gave up after {0} attempts")]
    SamplingExhausted(usize),
    #[error("parity-check entry ({0}, {1}) lies outside the low-rank space")]
    EntryOutsideF(usize, usize),
    #[error("code generation gave up after {0} attempts")]
    GenerationTimeout(usize),
    #[error("kernel of the parity-check matrix is not free of rank k")]
    KernelRankMismatch,
    #[error("erasure decoding found no consistent error vector")]
    ErasureInconsistent,
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
