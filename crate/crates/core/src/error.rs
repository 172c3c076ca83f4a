use thiserror::Error;

/// Everything that can go wrong inside the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("scalar variant mismatch: {0}")]
    ScalarMismatch(String),

    #[error("operation requires exact arithmetic: {0}")]
    InexactScalar(&'static str),

    #[error("point {point:?} is not in the index set")]
    OutsideDomain { point: Vec<i64> },

    #[error("arity mismatch: expected {expected}, got {got}")]
    Arity { expected: usize, got: usize },

    #[error("mixed-radix map requires a rectangular index set")]
    NotRectangular,

    #[error("index map is not injective: {0}")]
    NotInjective(String),

    #[error("domain mismatch: {0}")]
    DomainMismatch(String),

    #[error("permutation does not preserve the index set: {0}")]
    PermutationDomain(String),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("eigenvalues account for {covered} of {dim} dimensions")]
    MissedEigenvalue { covered: usize, dim: usize },

    #[error("parse error in `{field}`: {reason}")]
    Parse { field: String, reason: String },
}

impl Error {
    pub(crate) fn parse(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Parse {
            field: field.into(),
            reason: reason.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
