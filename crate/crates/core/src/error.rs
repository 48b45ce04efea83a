use thiserror::Error;

/// Errors produced by the verification and bound routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid level specification: {0}")]
    InvalidLevels(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("strength t={t} out of range for n={n} factors")]
    StrengthOutOfRange { t: usize, n: usize },

    #[error("word {word:?} does not fit the alphabet")]
    InvalidWord { word: Vec<u32> },

    #[error("array is empty")]
    EmptyArray,

    #[error("code alphabet differs from the graph alphabet")]
    AlphabetMismatch,

    #[error("code must be a simple set (row {word:?} has multiplicity {multiplicity})")]
    NotSimple { word: Vec<u32>, multiplicity: u64 },

    #[error("code is empty; covering-radius-1 regularity is undefined")]
    EmptyCode,

    #[error("code equals the whole vertex set; covering-radius-1 regularity is undefined")]
    CodeIsFullSpace,

    #[error("{what} size {size} exceeds the guard {guard}; pass force to override")]
    GuardExceeded { what: &'static str, size: u128, guard: u128 },

    #[error("eigenvalue index w={w} out of range 0..={n}")]
    EigenvalueOutOfRange { w: usize, n: usize },

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("matrix has rank {rank}, expected full row rank {expected}")]
    RankDeficient { rank: usize, expected: usize },

    #[error("block index {index} out of range ({count} blocks)")]
    BlockOutOfRange { index: usize, count: usize },

    #[error("design-bound precondition violated: k={k} must exceed theta={theta}")]
    DegenerateDesignBound { k: String, theta: String },

    #[error("tightness verdict requires strength {t}, but the array fails it")]
    StrengthPreconditionFailed { t: usize },

    #[error("value {value} is not on the eigenvalue lattice of H({n},{q})")]
    OffLattice { value: i64, n: usize, q: u32 },

    #[error("invalid polynomial combination: {0}")]
    InvalidCombination(String),

    #[error("arithmetic overflow while computing {0}")]
    Overflow(&'static str),

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Refuses sizes beyond the soft guard, or beyond the hard cap when forced.
pub(crate) fn check_guard(
    what: &'static str,
    size: u128,
    soft: u128,
    hard: u128,
    force: bool,
) -> Result<()> {
    let guard = if force { hard } else { soft };
    if size > guard {
        return Err(Error::GuardExceeded { what, size, guard });
    }
    Ok(())
}
