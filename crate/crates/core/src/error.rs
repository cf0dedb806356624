//! Error type shared by all modules.

use std::io;

use thiserror::Error;

/// Errors reported by the index structures and algorithms.
#[derive(Debug, Error)]
pub enum GbwtError {
    #[error("position {index} is out of bounds (length {len})")]
    OutOfBounds { index: usize, len: usize },

    #[error("no occurrence of rank {rank} for bit {bit}")]
    NotFound { rank: usize, bit: bool },

    #[error("malformed byte code at offset {offset}")]
    MalformedEncoding { offset: usize },

    #[error("node identifier 0 is reserved for the endmarker")]
    ReservedId,

    #[error("text {index} in the batch is empty")]
    EmptyText { index: usize },

    #[error("sequence {id} does not exist (index has {count} sequences)")]
    SequenceOutOfRange { id: usize, count: usize },

    #[error("node {node} is outside the node range of the index")]
    NodeOutOfRange { node: usize },

    #[error("cannot merge: node range [{}, {}] overlaps node range [{}, {}]", .left.0, .left.1, .right.0, .right.1)]
    MergeOverlap {
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("unsupported format: {0}")]
    UnsupportedFormat(String),

    #[error("corrupt index in section {section}: {detail}")]
    Corrupt {
        section: &'static str,
        detail: String,
    },

    #[error("unsupported operation: {0}")]
    Unsupported(&'static str),

    #[error("invalid path at position {position}: {reason}")]
    InvalidPath { position: usize, reason: String },

    #[error("node {0} has no mapping")]
    UnknownId(usize),

    #[error("inconsistent inputs: {0}")]
    Inconsistent(String),

    #[error("node identifier space exhausted")]
    IdSpaceExhausted,

    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T> = std::result::Result<T, GbwtError>;
