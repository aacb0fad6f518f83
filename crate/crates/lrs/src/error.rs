use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum LrsError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix rows do not span Z_q^n")]
    RankDeficient,
    #[error("columns are linearly dependent")]
    LinearlyDependent,
    #[error("target {0} lies outside the sampler support")]
    OutOfSupport(i64),
    #[error("trapdoor does not annihilate the matrix or is singular")]
    BadTrapdoor,
    #[error("gaussian parameter {sigma} below quality threshold {required}")]
    SigmaTooSmall { sigma: f64, required: f64 },
    #[error("vector is not in the requested coset")]
    NotInCoset,
    #[error("recovered coefficient {0} exceeds the tail cut")]
    TailExceeded(i64),
    #[error("lattice dimension too small for the gadget: need m >= {0}")]
    DimensionTooSmall(usize),
    #[error("trapdoor generation failed to reach full rank after {0} attempts")]
    RankFailure(usize),
    #[error("designated block does not span Z_q^n")]
    BlockNotSpanning,
    #[error("failed to collect an independent generating set within {0} draws")]
    IndependenceTimeout(usize),
    #[error("signing key does not match any ring member")]
    SignerNotInRing,
    #[error("signing key matches more than one ring member")]
    AmbiguousSigner,
    #[error("member's PRF bit selects a matrix that does not annihilate the signature")]
    PrfBitMismatch,
    #[error("no consistent parameter set: {0}")]
    UnsatisfiableParams(String),
    #[error("circuit arity mismatch: expected {expected} inputs, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("sampler support of {0} entries exceeds the configured cap")]
    SupportTooLarge(u64),
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    #[error("malformed {kind} data: {detail}")]
    Format { kind: &'static str, detail: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, LrsError>;
