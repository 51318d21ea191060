use thiserror::Error;

/// Errors produced by the simulator library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    #[error("bessel_j outside validity envelope: order {order}, argument {x}")]
    BesselDomain { order: i64, x: f64 },

    #[error("mode {0} is not in the canonical alphabet")]
    ModeOutOfAlphabet(i64),

    #[error("binomial C({n}, {k}) out of range")]
    BinomialRange { n: u64, k: u64 },

    #[error("combination rank {rank} out of range, K = {k}")]
    RankOutOfRange { rank: u64, k: u64 },

    #[error("malformed combination: {0}")]
    MalformedCombination(String),

    #[error("bit-string length {got}, expected {expected}")]
    BitLength { got: usize, expected: usize },

    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("config error: {0}")]
    Config(String),

    #[error("K = {k} combinations exceeds the guard limit {limit}; pass --force to proceed")]
    CombinationGuard { k: u64, limit: u64 },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code for the CLI: 2 config, 3 guard refusal, 4 numerical/runtime.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::InvalidGeometry(_) => 2,
            Error::CombinationGuard { .. } => 3,
            _ => 4,
        }
    }
}
