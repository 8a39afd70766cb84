use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix too large: {rows}x{cols} exceeds the limit of {limit} per side")]
    MatrixTooLarge { rows: usize, cols: usize, limit: usize },

    #[error("shape mismatch: {0}x{1} vs {2}x{3}")]
    ShapeMismatch(usize, usize, usize, usize),

    #[error("matrix is not square: {0}x{1}")]
    NotSquare(usize, usize),

    #[error("entry count {got} does not match {rows}x{cols}")]
    BadEntryCount { rows: usize, cols: usize, got: usize },

    #[error("matrix has a non-finite entry at ({0}, {1})")]
    NonFinite(usize, usize),

    #[error("eigensolver failed to converge on a {0}x{0} matrix")]
    EigenNoConvergence(usize),

    #[error("singular value decomposition failed to converge on a {0}x{1} matrix")]
    SvdNoConvergence(usize, usize),

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("invalid ensemble: {0}")]
    InvalidEnsemble(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("not bipartite: dimension {0} is not a perfect square")]
    NotBipartite(usize),

    #[error("not a collective ensemble: item {0} is not of the form u \u{2297} u")]
    NotCollective(usize),

    #[error("degenerate pivot: operator {0} is proportional to the identity")]
    DegeneratePivot(usize),

    #[error("wrong arity: expected {expected}, got {got}")]
    WrongArity { expected: usize, got: usize },

    #[error("ensemble does not converge to the twirling operation")]
    NotConvergent,

    #[error("invalid construction: {0}")]
    InvalidConstruction(String),

    #[error("invalid word {0:?}: {1}")]
    InvalidWord(String, String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
