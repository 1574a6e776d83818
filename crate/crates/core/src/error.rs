use std::io;

use thiserror::Error;

use crate::graph::VertexId;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("line {line}: self-loop on vertex {vertex}")]
    SelfLoop { line: usize, vertex: VertexId },

    #[error("line {line}: edge ({u}, {v}) does not cross the bipartition")]
    BipartitionViolation { line: usize, u: VertexId, v: VertexId },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid generator parameters: {0}")]
    InvalidGenerator(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("graph is not bipartite")]
    NotBipartite,

    #[error("instance too large for brute force: {0}")]
    TooLarge(String),

    #[error("certificate violation: {0}")]
    Certificate(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
