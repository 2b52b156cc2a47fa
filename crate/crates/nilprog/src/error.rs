use thiserror::Error;

/// Errors raised by group, word, and certification operations.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("letter index {letter} outside 1..={d}")]
    LetterOutOfRange { letter: u32, d: u32 },

    #[error("arity mismatch: {left} vs {right}")]
    ArityMismatch { left: usize, right: usize },

    #[error("tuple length {got} does not match arity {expected}")]
    TupleLengthMismatch { expected: usize, got: usize },

    #[error("word does not conform to d={d}, k={k}: {reason}")]
    NonconformingWord { d: u32, k: u32, reason: String },

    #[error("invalid group parameters: {0}")]
    InvalidConfig(String),

    #[error("generator count {got} does not match rank {rank}")]
    RankMismatch { rank: u32, got: usize },

    #[error("edge {edge} references point index {index} outside ground set of size {size}")]
    InvalidEdge {
        edge: usize,
        index: usize,
        size: usize,
    },

    #[error("cannot parse word {input:?}: {reason}")]
    WordParse { input: String, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
