use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("graph6 parse error at byte {offset}: {reason}")]
    Graph6 { offset: usize, reason: String },

    #[error("adjacency text error at row {row}, column {col}: {reason}")]
    AdjacencyText {
        row: usize,
        col: usize,
        reason: String,
    },

    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is singular")]
    Singular,

    #[error("matrix is rank deficient (rank {rank} of {size})")]
    RankDeficient { rank: usize, size: usize },

    #[error("invalid switching partition: {0}")]
    InvalidPartition(String),

    #[error("2-adic valuation of zero is undefined")]
    ZeroValuation,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("graph is not controllable (walk matrix is singular)")]
    NotControllable,

    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
