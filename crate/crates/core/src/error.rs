use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("ground set of size {0} is outside the supported range 1..=64")]
    GroundSetSize(usize),
    #[error("ground sets differ: {0} vs {1}")]
    GroundMismatch(usize, usize),
    #[error("separation {0} does not belong to the universe")]
    NotInUniverse(String),
    #[error("interval is empty: lower end is not below upper end")]
    EmptyInterval,
    #[error("multiset is not a star")]
    NotAStar,
    #[error("ground set of size {size} exceeds the exhaustive cap {cap}")]
    OverCap { size: usize, cap: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("candidate budget of {0} exceeded")]
    BudgetExceeded(usize),
    #[error("malformed matrix: {0}")]
    MalformedMatrix(String),
    #[error("invalid decomposition: {0}")]
    InvalidDecomposition(String),
    #[error("S-tree is not tame: {0}")]
    NotTame(String),
    #[error("label mismatch while gluing")]
    LabelMismatch,
    #[error("iteration cap of {0} exceeded")]
    IterationCap(usize),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
