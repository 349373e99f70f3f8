use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AlphabetError {
    #[error("alphabet mismatch: {0} vs {1}")]
    AlphabetMismatch(String, String),
    #[error("{0} carries no group structure")]
    NotAGroup(String),
    #[error("cyclic modulus must be positive")]
    ZeroModulus,
    #[error("phi must lie strictly between 0 and 1, got {0}")]
    InvalidPhi(f64),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SubstitutionError {
    #[error(transparent)]
    Alphabet(#[from] AlphabetError),
    #[error("rule has no columns")]
    Empty,
    #[error("no internal column among powers up to {max_power} of a length-{length} rule")]
    NoInternalColumn { length: usize, max_power: u32 },
    #[error("pseudo-fixed window is not nested at coordinate {coordinate}")]
    NotNested { coordinate: i64 },
    #[error("spin matrix must be square with at least two rows")]
    MalformedSpinMatrix,
    #[error("origin index {origin} outside a word of length {len}")]
    OriginOutOfRange { origin: usize, len: usize },
    #[error("unsupported operation: {0}")]
    Unsupported(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EtaError {
    #[error("window too small: lag {needed} requested, {available} available")]
    WindowTooSmall { needed: i64, available: i64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Alphabet(#[from] AlphabetError),
    #[error(transparent)]
    Substitution(#[from] SubstitutionError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ClassifyError {
    #[error("hypothesis of {theorem} violated: {reason}")]
    HypothesisViolation {
        theorem: &'static str,
        reason: String,
    },
    #[error(transparent)]
    Alphabet(#[from] AlphabetError),
    #[error(transparent)]
    Substitution(#[from] SubstitutionError),
    #[error(transparent)]
    Eta(#[from] EtaError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DiffractionError {
    #[error("window too small: lag {needed} requested, {available} available")]
    WindowTooSmall { needed: i64, available: i64 },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("power iteration did not converge within {iterations} iterations")]
    NoConvergence { iterations: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid seed: {0}")]
    InvalidSeed(String),
}
