use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("degenerate block {0}: all entries are zero")]
    DegenerateBlock(usize),

    #[error("non-finite entries in {0}")]
    NonFinite(&'static str),

    #[error("block index {index} out of range for {blocks} blocks")]
    BlockIndex { index: usize, blocks: usize },

    #[error("empty support")]
    EmptySupport,

    #[error("no used blocks")]
    NoUsedBlocks,

    #[error("no unused blocks")]
    NoUnusedBlocks,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
