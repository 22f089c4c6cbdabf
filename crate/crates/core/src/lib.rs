//! Approximation algorithms for min-distance parameters of directed graphs.
//!
//! The min-distance between `u` and `v` is `min(d(u, v), d(v, u))`. This
//! crate computes the min-diameter, min-radius and per-vertex
//! min-eccentricities, exactly (for small graphs) and approximately.

pub mod compare;
pub mod diameter;
pub mod dimacs;
pub mod ecc;
pub mod error;
pub mod generate;
pub mod graph;
pub mod oracle;
pub mod partition;
pub mod radius;
pub mod report;
pub mod scc;
pub mod seed;

pub use error::{Error, Result};
pub use graph::{Counters, Distance, Graph, Vertex, Weight};

/// Worker count from `MINDIST_THREADS`; `0` or unset means automatic.
pub fn configured_threads() -> Option<usize> {
    std::env::var("MINDIST_THREADS")
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .filter(|&t| t > 0)
}

/// Sizes the global rayon pool from `MINDIST_THREADS`. Later calls are no-ops.
pub fn init_threads() {
    if let Some(t) = configured_threads() {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
}
