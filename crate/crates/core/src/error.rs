use std::path::PathBuf;

use thiserror::Error;

use crate::graph::Vertex;

/// Errors surfaced by graph construction, file handling and the
/// approximation pipelines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("graph must contain at least one vertex")]
    EmptyGraph,

    #[error("vertex {vertex} out of range for a graph with {n} vertices")]
    InvalidVertex { vertex: Vertex, n: usize },

    #[error("negative edge weight {weight} on arc {src} -> {dst}")]
    NegativeWeight { src: Vertex, dst: Vertex, weight: i64 },

    #[error("edge weight {weight} exceeds the supported maximum {max}")]
    WeightTooLarge { weight: u64, max: u64 },

    #[error("this pipeline requires strictly positive weights, found a zero-weight arc {src} -> {dst}")]
    ZeroWeight { src: Vertex, dst: Vertex },

    #[error("unweighted mode requires every arc to have weight 1, found weight {weight}")]
    NotUnitWeight { weight: u64 },

    #[error("vertex {target} is not reachable from the tree source {from}")]
    Unreachable { from: Vertex, target: Vertex },

    #[error("input graph is not strongly connected")]
    NotStronglyConnected,

    #[error("path edge of weight {weight} exceeds the subdivision limit {limit}")]
    EdgeExceedsLimit { weight: u64, limit: u64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("graph has {n} vertices, above the oracle guard of {limit}; pass --force to run anyway")]
    OracleGuard { n: usize, limit: usize },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
