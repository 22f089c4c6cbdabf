//! Independent reference implementations shared by the integration tests.
#![allow(dead_code)]

use mindist::generate::{gen_random, Model};
use mindist::{Distance, Graph};
use petgraph::algo::kosaraju_scc;
use petgraph::graph::DiGraph;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Matrix = Vec<Vec<Option<u64>>>;

pub fn floyd_warshall(g: &Graph) -> Matrix {
    let n = g.vertex_count();
    let mut d = vec![vec![None; n]; n];
    for v in 0..n {
        d[v][v] = Some(0);
    }
    for (u, v, w) in g.edges() {
        d[u][v] = Some(d[u][v].map_or(w, |x: u64| x.min(w)));
    }
    for k in 0..n {
        for i in 0..n {
            let Some(ik) = d[i][k] else { continue };
            for j in 0..n {
                if let Some(kj) = d[k][j] {
                    if d[i][j].is_none_or(|x| ik + kj < x) {
                        d[i][j] = Some(ik + kj);
                    }
                }
            }
        }
    }
    d
}

pub fn bellman_ford(g: &Graph, s: usize) -> Vec<Option<u64>> {
    let n = g.vertex_count();
    let mut d = vec![None; n];
    d[s] = Some(0);
    for _ in 0..n {
        let mut changed = false;
        for (u, v, w) in g.edges() {
            if let Some(du) = d[u] {
                if d[v].is_none_or(|x| du + w < x) {
                    d[v] = Some(du + w);
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    d
}

/// Shortest distances by enumerating every simple path.
pub fn enumerate_paths(g: &Graph) -> Matrix {
    let n = g.vertex_count();
    let mut best = vec![vec![None; n]; n];
    for s in 0..n {
        let mut on_path = vec![false; n];
        walk(g, s, 0, &mut on_path, &mut best[s]);
    }
    best
}

fn walk(g: &Graph, v: usize, len: u64, on_path: &mut [bool], best: &mut [Option<u64>]) {
    if best[v].is_none_or(|b| len < b) {
        best[v] = Some(len);
    }
    on_path[v] = true;
    for (x, w) in g.out_edges(v) {
        if !on_path[x] {
            walk(g, x, len + w, on_path, best);
        }
    }
    on_path[v] = false;
}

pub fn dist(x: Option<u64>) -> Distance {
    x.map_or(Distance::INFINITY, Distance::new)
}

pub fn min_dist(d: &Matrix, u: usize, v: usize) -> Distance {
    dist(d[u][v]).min(dist(d[v][u]))
}

pub fn eccentricities(d: &Matrix) -> Vec<Distance> {
    let n = d.len();
    (0..n)
        .map(|v| (0..n).map(|u| min_dist(d, u, v)).max().unwrap_or(Distance::ZERO))
        .collect()
}

pub fn diameter_radius(d: &Matrix) -> (Distance, Distance) {
    let e = eccentricities(d);
    (*e.iter().max().unwrap(), *e.iter().min().unwrap())
}

pub fn scc_count(n: usize, edges: &[(usize, usize)]) -> usize {
    let mut pg = DiGraph::<(), ()>::new();
    let nodes: Vec<_> = (0..n).map(|_| pg.add_node(())).collect();
    for &(u, v) in edges {
        pg.add_edge(nodes[u], nodes[v], ());
    }
    kosaraju_scc(&pg).len()
}

pub fn is_strong(g: &Graph) -> bool {
    let edges: Vec<_> = g.edges().map(|(u, v, _)| (u, v)).collect();
    scc_count(g.vertex_count(), &edges) == 1
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random graph with arbitrary connectivity: `n` in `[lo, hi]`, arc
/// density drawn per instance.
pub fn mixed_graph(seed: u64, lo: usize, hi: usize, weights: (u64, u64)) -> Graph {
    let mut r = rng(seed);
    let n = r.gen_range(lo..=hi);
    let cap = n * (n - 1);
    let m = if cap == 0 { 0 } else { r.gen_range(0..=cap.min(4 * n)) };
    shifted(gen_random(n, m, (weights.0 + 1, weights.1 + 1), Model::UniformArcs, seed).unwrap())
}

fn shifted(g: Graph) -> Graph {
    let n = g.vertex_count();
    let edges: Vec<_> = g.edges().map(|(u, v, w)| (u, v, w - 1)).collect();
    Graph::from_edges(n, edges).unwrap()
}

pub fn strong_graph(seed: u64, lo: usize, hi: usize, weights: (u64, u64)) -> Graph {
    let mut r = rng(seed ^ 0xabcd);
    let n = r.gen_range(lo.max(2)..=hi);
    let cap = n * (n - 1);
    let m = r.gen_range(n..=cap.min(4 * n));
    shifted(gen_random(n, m, (weights.0 + 1, weights.1 + 1), Model::StronglyConnected, seed).unwrap())
}

/// Planted center: vertex 0 is joined to every other vertex by a unit arc in
/// a random direction, and the other vertices lie on a heavy ring. Only the
/// center has small eccentricity.
pub fn planted_center(seed: u64, n: usize, ring_weight: u64) -> Graph {
    let mut r = rng(seed);
    let mut edges = Vec::new();
    let mut leaves: Vec<usize> = (1..n).collect();
    for &v in &leaves {
        if r.gen_bool(0.5) {
            edges.push((0, v, 1));
        } else {
            edges.push((v, 0, 1));
        }
    }
    use rand::seq::SliceRandom;
    leaves.shuffle(&mut r);
    for i in 0..leaves.len() {
        edges.push((leaves[i], leaves[(i + 1) % leaves.len()], ring_weight));
    }
    Graph::from_edges(n, edges).unwrap()
}
