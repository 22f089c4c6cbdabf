//! Seeded random graph generators.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex, Weight, MAX_WEIGHT};
use crate::seed;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Model {
    /// `m` distinct arcs chosen uniformly.
    UniformArcs,
    /// A random Hamiltonian cycle plus `m - n` further distinct arcs.
    StronglyConnected,
}

pub fn gen_random(n: usize, m: usize, weights: (Weight, Weight), model: Model, seed_value: u64) -> Result<Graph> {
    let (lo, hi) = weights;
    if lo == 0 || lo > hi || hi > MAX_WEIGHT {
        return Err(Error::InvalidParameter(format!(
            "weight range must satisfy 1 <= min <= max <= {MAX_WEIGHT}, got [{lo}, {hi}]"
        )));
    }
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    let capacity = n.saturating_mul(n - 1);
    if m > capacity {
        return Err(Error::InvalidParameter(format!(
            "{m} arcs do not fit in a simple digraph on {n} vertices"
        )));
    }
    let cycle_len = if n >= 2 { n } else { 0 };
    if model == Model::StronglyConnected && m < cycle_len {
        return Err(Error::InvalidParameter(format!(
            "a strongly connected graph on {n} vertices needs at least {cycle_len} arcs"
        )));
    }

    let mut rng = seed::rng(seed_value);
    let mut arcs: BTreeSet<(Vertex, Vertex)> = BTreeSet::new();
    let mut ordered = Vec::with_capacity(m);
    if model == Model::StronglyConnected && n >= 2 {
        let mut perm: Vec<Vertex> = (0..n).collect();
        perm.shuffle(&mut rng);
        for i in 0..n {
            let arc = (perm[i], perm[(i + 1) % n]);
            arcs.insert(arc);
            ordered.push(arc);
        }
    }
    let wanted = m - ordered.len();
    if wanted > 0 {
        // dense requests enumerate the free arcs; sparse ones reject duplicates
        if 2 * (ordered.len() + wanted) > capacity {
            let mut free: Vec<(Vertex, Vertex)> = (0..n)
                .flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)))
                .filter(|a| !arcs.contains(a))
                .collect();
            free.shuffle(&mut rng);
            ordered.extend(free.into_iter().take(wanted));
        } else {
            while ordered.len() < m {
                let u = rng.gen_range(0..n);
                let v = rng.gen_range(0..n);
                if u != v && arcs.insert((u, v)) {
                    ordered.push((u, v));
                }
            }
        }
    }
    let edges: Vec<_> = ordered
        .into_iter()
        .map(|(u, v)| (u, v, rng.gen_range(lo..=hi)))
        .collect();
    Graph::from_edges(n, edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scc::graph_is_strongly_connected;

    #[test]
    fn single_vertex() {
        let g = gen_random(1, 0, (1, 1), Model::UniformArcs, 0).unwrap();
        assert_eq!(g.vertex_count(), 1);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn strongly_connected_model_is_strong() {
        for s in 0..20 {
            let g = gen_random(30, 60, (1, 5), Model::StronglyConnected, s).unwrap();
            assert!(graph_is_strongly_connected(&g));
            assert_eq!(g.edge_count(), 60);
        }
    }

    #[test]
    fn same_seed_same_graph() {
        let a = gen_random(40, 200, (1, 9), Model::UniformArcs, 5).unwrap();
        let b = gen_random(40, 200, (1, 9), Model::UniformArcs, 5).unwrap();
        assert_eq!(crate::dimacs::to_string(&a), crate::dimacs::to_string(&b));
    }

    #[test]
    fn infeasible_requests_fail() {
        assert!(gen_random(3, 7, (1, 1), Model::UniformArcs, 0).is_err());
        assert!(gen_random(5, 3, (1, 1), Model::StronglyConnected, 0).is_err());
        assert!(gen_random(5, 3, (0, 1), Model::UniformArcs, 0).is_err());
    }

    #[test]
    fn dense_request_fills_up() {
        let g = gen_random(6, 30, (1, 1), Model::UniformArcs, 2).unwrap();
        assert_eq!(g.edge_count(), 30);
    }
}
