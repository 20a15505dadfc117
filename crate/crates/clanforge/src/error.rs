use thiserror::Error;

/// Errors surfaced by ingestion and the analysis operations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("duplicate character id {0} in metadata")]
    DuplicateCharacter(u64),

    #[error("missing metadata for character {0}")]
    MissingMetadata(u64),

    #[error("unknown character id {0}")]
    UnknownCharacter(u64),

    #[error("node index {index} out of range for graph with {node_count} nodes")]
    NodeOutOfRange { index: usize, node_count: usize },

    #[error("graph is empty")]
    EmptyGraph,

    #[error("nodes {0} and {1} are not connected")]
    Unreachable(u64, u64),

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("zero variance in {0}; correlation undefined")]
    ZeroVariance(String),

    #[error("partitions cover different node sets")]
    MismatchedNodeSets,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
