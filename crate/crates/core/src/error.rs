use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("unknown series symbol `{0}`")]
    UnknownSymbol(String),

    #[error("insufficient theta coefficients: need at least {needed}, got {got}")]
    InsufficientCoefficients { needed: usize, got: usize },

    #[error("theta coefficient mismatch at q^{index}: expected {expected}, got {got}")]
    CoefficientMismatch {
        index: usize,
        expected: String,
        got: String,
    },

    #[error("odd-norm coefficient N_{index} = {value} is nonzero; not an even lattice")]
    OddCoefficient { index: usize, value: String },

    #[error("invalid theta coefficients: {0}")]
    InvalidTheta(String),

    #[error("invalid Gram matrix: {0}")]
    InvalidGram(String),

    #[error("enumeration budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("invalid secrecy profile: {0}")]
    InvalidProfile(String),

    #[error("zero polynomial")]
    ZeroPolynomial,

    #[error("polynomial vanishes at interval endpoint {0}")]
    RootAtEndpoint(String),

    #[error("empty interval: lo = {lo}, hi = {hi}")]
    EmptyInterval { lo: String, hi: String },

    #[error("insufficient cut: at least {required} theta coefficients are needed for the requested precision")]
    InsufficientCut { required: usize },

    #[error("unknown catalog entry `{0}`")]
    UnknownEntry(String),

    #[error("invalid descriptor: {0}")]
    Descriptor(String),
}

pub type Result<T> = std::result::Result<T, Error>;
