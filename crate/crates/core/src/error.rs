use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Malformed or inconsistent user input.
    #[error("input error: {0}")]
    Input(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("dual cone not pointed: rays do not span")]
    DualNotPointed,
    #[error("cone not full-dimensional")]
    NotFullDimensional,
    #[error("cone not pointed: normals do not span")]
    NotPointed,
    #[error("chamber {0} is infeasible")]
    InfeasibleChamber(String),
    #[error("index {index} out of range (expected < {len})")]
    InvalidIndex { index: usize, len: usize },
    #[error("cells are not a facet pair")]
    NotFacetPair,
    #[error("cells belong to different chambers")]
    DifferentChambers,
    #[error("support is not closed: {0}")]
    SupportNotClosed(String),
    #[error("chamber {0} lies outside the support")]
    OutsideSupport(String),
    #[error("no q <= {cap} hits every class")]
    CapExceeded { cap: u64 },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// An internal consistency check failed; this indicates a bug.
    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    /// CLI exit status: 2 for invariant failures, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Invariant(_) => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
