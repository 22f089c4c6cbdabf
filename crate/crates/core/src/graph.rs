//! Directed weighted graphs in compressed adjacency form, plus the
//! single-source shortest path primitives the pipelines are built on.
//!
//! Vertices are the integers `0..n`. The integer doubles as the unique
//! tie-breaking identifier when two directed distances are equal.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fmt;
use std::ops::Add;
use std::sync::atomic::{AtomicU64, Ordering};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Vertex = usize;
pub type Weight = u64;

/// Largest accepted arc weight. Keeps every finite path length far below
/// the infinity sentinel.
pub const MAX_WEIGHT: Weight = u32::MAX as Weight;

/// A shortest-path length, or the unreachable marker.
///
/// Addition saturates at [`Distance::INFINITY`], which compares greater
/// than every finite value.
#[derive(Copy, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Distance(u64);

impl Distance {
    pub const ZERO: Distance = Distance(0);
    pub const INFINITY: Distance = Distance(u64::MAX);

    /// Wraps a finite length. `u64::MAX` is reserved and maps to infinity.
    pub const fn new(value: u64) -> Self {
        Distance(value)
    }

    pub const fn is_finite(self) -> bool {
        self.0 != u64::MAX
    }

    pub const fn is_infinite(self) -> bool {
        self.0 == u64::MAX
    }

    pub fn finite(self) -> Option<u64> {
        self.is_finite().then_some(self.0)
    }

    /// Raw value; `u64::MAX` for infinity.
    pub const fn raw(self) -> u64 {
        self.0
    }

    /// `max(self - amount, 0)`, with infinity absorbing.
    pub fn saturating_sub(self, amount: u64) -> Distance {
        if self.is_infinite() {
            self
        } else {
            Distance(self.0.saturating_sub(amount))
        }
    }

    /// `self <= limit`, where `limit` is a finite threshold.
    pub fn within(self, limit: u64) -> bool {
        self.is_finite() && self.0 <= limit
    }
}

impl Add for Distance {
    type Output = Distance;

    fn add(self, rhs: Distance) -> Distance {
        if self.is_infinite() || rhs.is_infinite() {
            Distance::INFINITY
        } else {
            Distance(self.0.saturating_add(rhs.0).min(u64::MAX - 1))
        }
    }
}

impl Add<Weight> for Distance {
    type Output = Distance;

    fn add(self, rhs: Weight) -> Distance {
        self + Distance(rhs)
    }
}

impl From<u64> for Distance {
    fn from(value: u64) -> Self {
        Distance(value)
    }
}

impl fmt::Debug for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.finite() {
            Some(v) => write!(f, "{v}"),
            None => f.write_str("inf"),
        }
    }
}

// Serialized as a JSON number, or `null` for infinity.
impl Serialize for Distance {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.finite().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Distance {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        Ok(Option::<u64>::deserialize(deserializer)?.map_or(Distance::INFINITY, Distance))
    }
}

/// `min(a, b)` over directed distances.
pub fn min_of(a: Distance, b: Distance) -> Distance {
    a.min(b)
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// Distances from the source: `d(source, v)`.
    Forward,
    /// Distances to the source: `d(v, source)`.
    Backward,
}

/// Work counters shared by every Dijkstra invocation of a run.
#[derive(Debug, Default)]
pub struct Counters {
    dijkstra_runs: AtomicU64,
    relaxations: AtomicU64,
}

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CounterSnapshot {
    pub dijkstra_runs: u64,
    /// Arcs scanned out of settled (popped) vertices.
    pub relaxations: u64,
}

impl Counters {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn snapshot(&self) -> CounterSnapshot {
        CounterSnapshot {
            dijkstra_runs: self.dijkstra_runs.load(Ordering::Relaxed),
            relaxations: self.relaxations.load(Ordering::Relaxed),
        }
    }

    fn record(&self, relaxations: u64) {
        self.dijkstra_runs.fetch_add(1, Ordering::Relaxed);
        self.relaxations.fetch_add(relaxations, Ordering::Relaxed);
    }
}

/// Immutable directed weighted graph with forward and reverse compressed
/// adjacency. Parallel arcs are collapsed to their minimum weight and
/// self-loops are dropped at construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    out_offsets: Vec<usize>,
    out_targets: Vec<Vertex>,
    out_weights: Vec<Weight>,
    in_offsets: Vec<usize>,
    in_sources: Vec<Vertex>,
    in_weights: Vec<Weight>,
}

impl Graph {
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vertex, Vertex, Weight)>,
    {
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut arcs = Vec::new();
        for (src, dst, weight) in edges {
            for vertex in [src, dst] {
                if vertex >= n {
                    return Err(Error::InvalidVertex { vertex, n });
                }
            }
            if weight > MAX_WEIGHT {
                return Err(Error::WeightTooLarge {
                    weight,
                    max: MAX_WEIGHT,
                });
            }
            if src != dst {
                arcs.push((src, dst, weight));
            }
        }
        arcs.sort_unstable();
        // sorted by weight within (src, dst), so the first copy is the lightest
        arcs.dedup_by_key(|&mut (s, d, _)| (s, d));
        Ok(Self::from_sorted_arcs(n, &arcs))
    }

    /// Builds from arcs whose weights are finite distances of another
    /// graph, so they may exceed [`MAX_WEIGHT`]. Used for derived graphs.
    pub(crate) fn from_derived_arcs(n: usize, mut arcs: Vec<(Vertex, Vertex, Weight)>) -> Graph {
        arcs.retain(|&(s, d, _)| s != d);
        arcs.sort_unstable();
        arcs.dedup_by_key(|&mut (s, d, _)| (s, d));
        Graph::from_sorted_arcs(n, &arcs)
    }

    fn from_sorted_arcs(n: usize, arcs: &[(Vertex, Vertex, Weight)]) -> Self {
        let mut out_offsets = vec![0; n + 1];
        let mut in_offsets = vec![0; n + 1];
        for &(s, d, _) in arcs {
            out_offsets[s + 1] += 1;
            in_offsets[d + 1] += 1;
        }
        for v in 0..n {
            out_offsets[v + 1] += out_offsets[v];
            in_offsets[v + 1] += in_offsets[v];
        }
        let m = arcs.len();
        let out_targets = arcs.iter().map(|a| a.1).collect();
        let out_weights = arcs.iter().map(|a| a.2).collect();

        let mut in_sources = vec![0; m];
        let mut in_weights = vec![0; m];
        let mut cursor = in_offsets.clone();
        for &(s, d, w) in arcs {
            let slot = cursor[d];
            in_sources[slot] = s;
            in_weights[slot] = w;
            cursor[d] += 1;
        }
        Graph {
            n,
            out_offsets,
            out_targets,
            out_weights,
            in_offsets,
            in_sources,
            in_weights,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.out_targets.len()
    }

    pub fn vertices(&self) -> std::ops::Range<Vertex> {
        0..self.n
    }

    pub fn check_vertex(&self, vertex: Vertex) -> Result<()> {
        if vertex < self.n {
            Ok(())
        } else {
            Err(Error::InvalidVertex { vertex, n: self.n })
        }
    }

    pub fn out_edges(&self, v: Vertex) -> impl Iterator<Item = (Vertex, Weight)> + '_ {
        let range = self.out_offsets[v]..self.out_offsets[v + 1];
        self.out_targets[range.clone()]
            .iter()
            .copied()
            .zip(self.out_weights[range].iter().copied())
    }

    pub fn in_edges(&self, v: Vertex) -> impl Iterator<Item = (Vertex, Weight)> + '_ {
        let range = self.in_offsets[v]..self.in_offsets[v + 1];
        self.in_sources[range.clone()]
            .iter()
            .copied()
            .zip(self.in_weights[range].iter().copied())
    }

    /// Neighbours in the given direction: successors for `Forward`,
    /// predecessors for `Backward`.
    pub fn neighbors(
        &self,
        v: Vertex,
        direction: Direction,
    ) -> Box<dyn Iterator<Item = (Vertex, Weight)> + '_> {
        match direction {
            Direction::Forward => Box::new(self.out_edges(v)),
            Direction::Backward => Box::new(self.in_edges(v)),
        }
    }

    /// All arcs as `(src, dst, weight)`, sorted by `(src, dst)`.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex, Weight)> + '_ {
        (0..self.n).flat_map(move |u| self.out_edges(u).map(move |(v, w)| (u, v, w)))
    }

    pub fn min_weight(&self) -> Option<Weight> {
        self.out_weights.iter().copied().min()
    }

    pub fn max_weight(&self) -> Option<Weight> {
        self.out_weights.iter().copied().max()
    }

    pub fn require_positive_weights(&self) -> Result<()> {
        match self.edges().find(|&(_, _, w)| w == 0) {
            Some((src, dst, _)) => Err(Error::ZeroWeight { src, dst }),
            None => Ok(()),
        }
    }

    pub fn require_unit_weights(&self) -> Result<()> {
        match self.out_weights.iter().find(|&&w| w != 1) {
            Some(&weight) => Err(Error::NotUnitWeight { weight }),
            None => Ok(()),
        }
    }

    /// Copy of the graph without arcs heavier than `limit`.
    pub fn without_heavier_than(&self, limit: Weight) -> Graph {
        let arcs: Vec<_> = self.edges().filter(|&(_, _, w)| w <= limit).collect();
        Graph::from_sorted_arcs(self.n, &arcs)
    }

    /// Subgraph induced by `vertices`; vertex `vertices[i]` becomes `i`.
    /// `local` must map every vertex of `self` to its local index or `None`
    /// and is left clear again on return.
    pub fn induced_subgraph(&self, vertices: &[Vertex], local: &mut [Option<Vertex>]) -> Graph {
        for (i, &v) in vertices.iter().enumerate() {
            local[v] = Some(i);
        }
        let mut arcs = Vec::new();
        for (i, &u) in vertices.iter().enumerate() {
            for (v, w) in self.out_edges(u) {
                if let Some(j) = local[v] {
                    arcs.push((i, j, w));
                }
            }
        }
        for &v in vertices {
            local[v] = None;
        }
        arcs.sort_unstable();
        Graph::from_sorted_arcs(vertices.len().max(1), &arcs)
    }
}

/// One direction of single-source shortest paths.
#[derive(Clone, Debug)]
pub struct ShortestPathTree {
    pub source: Vertex,
    pub direction: Direction,
    pub dist: Vec<Distance>,
    /// For `Forward`, the predecessor of `v` on a shortest `source -> v`
    /// path. For `Backward`, the successor of `v` on a shortest
    /// `v -> source` path.
    pub parent: Vec<Option<Vertex>>,
}

/// Exact single-source distances with a binary heap.
///
/// # Panics
/// If `source` is not a vertex of `g`.
pub fn dijkstra(
    g: &Graph,
    source: Vertex,
    direction: Direction,
    counters: &Counters,
) -> ShortestPathTree {
    assert!(source < g.n, "dijkstra source {source} out of range");
    let mut dist = vec![Distance::INFINITY; g.n];
    let mut parent = vec![None; g.n];
    let mut heap = BinaryHeap::new();
    let mut relaxations = 0u64;
    dist[source] = Distance::ZERO;
    heap.push(Reverse((Distance::ZERO, source)));

    while let Some(Reverse((d, u))) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        let (targets, weights) = match direction {
            Direction::Forward => {
                let r = g.out_offsets[u]..g.out_offsets[u + 1];
                (&g.out_targets[r.clone()], &g.out_weights[r])
            }
            Direction::Backward => {
                let r = g.in_offsets[u]..g.in_offsets[u + 1];
                (&g.in_sources[r.clone()], &g.in_weights[r])
            }
        };
        relaxations += targets.len() as u64;
        for (&v, &w) in targets.iter().zip(weights) {
            let candidate = d + w;
            if candidate < dist[v] {
                dist[v] = candidate;
                parent[v] = Some(u);
                heap.push(Reverse((candidate, v)));
            }
        }
    }
    counters.record(relaxations);
    ShortestPathTree {
        source,
        direction,
        dist,
        parent,
    }
}

/// Forward and backward shortest-path trees for one source.
#[derive(Clone, Debug)]
pub struct DistanceField {
    pub source: Vertex,
    pub from: ShortestPathTree,
    pub to: ShortestPathTree,
}

impl DistanceField {
    pub fn compute(g: &Graph, source: Vertex, counters: &Counters) -> Self {
        DistanceField {
            source,
            from: dijkstra(g, source, Direction::Forward, counters),
            to: dijkstra(g, source, Direction::Backward, counters),
        }
    }

    /// `d(source, v)`
    pub fn dist_from(&self, v: Vertex) -> Distance {
        self.from.dist[v]
    }

    /// `d(v, source)`
    pub fn dist_to(&self, v: Vertex) -> Distance {
        self.to.dist[v]
    }

    pub fn min_distance(&self, v: Vertex) -> Distance {
        self.from.dist[v].min(self.to.dist[v])
    }

    /// Min-eccentricity of the source.
    pub fn eccentricity(&self) -> Distance {
        (0..self.from.dist.len())
            .map(|v| self.min_distance(v))
            .max()
            .unwrap_or(Distance::ZERO)
    }
}

/// `d_min(u, v) = min(d(u, v), d(v, u))`.
pub fn min_distance(g: &Graph, u: Vertex, v: Vertex, counters: &Counters) -> Result<Distance> {
    g.check_vertex(u)?;
    g.check_vertex(v)?;
    if u == v {
        return Ok(Distance::ZERO);
    }
    let field = DistanceField::compute(g, u, counters);
    Ok(field.min_distance(v))
}

/// Vertex sequence of the tree path between the source and `target`.
///
/// Forward trees yield `source, ..., target`; backward trees yield
/// `target, ..., source`, so in both cases the sequence follows arc
/// direction.
pub fn extract_path(tree: &ShortestPathTree, target: Vertex) -> Result<Vec<Vertex>> {
    if target >= tree.dist.len() {
        return Err(Error::InvalidVertex {
            vertex: target,
            n: tree.dist.len(),
        });
    }
    if tree.dist[target].is_infinite() {
        return Err(Error::Unreachable {
            from: tree.source,
            target,
        });
    }
    let mut path = vec![target];
    let mut cur = target;
    while cur != tree.source {
        cur = tree.parent[cur].expect("reachable vertex has a parent");
        path.push(cur);
    }
    if tree.direction == Direction::Forward {
        path.reverse();
    }
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> Graph {
        Graph::from_edges(3, [(0, 1, 1), (1, 2, 1)]).unwrap()
    }

    #[test]
    fn forward_two_hop_path() {
        let c = Counters::new();
        let t = dijkstra(&path3(), 0, Direction::Forward, &c);
        assert_eq!(t.dist, vec![Distance::new(0), Distance::new(1), Distance::new(2)]);
        assert_eq!(c.snapshot().dijkstra_runs, 1);
        assert_eq!(c.snapshot().relaxations, 2);
    }

    #[test]
    fn backward_has_no_incoming_paths() {
        let t = dijkstra(&path3(), 0, Direction::Backward, &Counters::new());
        assert_eq!(t.dist, vec![Distance::ZERO, Distance::INFINITY, Distance::INFINITY]);
    }

    #[test]
    fn parallel_arcs_collapse_and_self_loops_vanish() {
        let g = Graph::from_edges(2, [(0, 1, 7), (0, 1, 3), (1, 1, 1), (0, 1, 5)]).unwrap();
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1, 3)]);
        assert_eq!(g.in_edges(1).collect::<Vec<_>>(), vec![(0, 3)]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(Graph::from_edges(0, []), Err(Error::EmptyGraph)));
        assert!(matches!(
            Graph::from_edges(2, [(0, 2, 1)]),
            Err(Error::InvalidVertex { vertex: 2, n: 2 })
        ));
        assert!(matches!(
            Graph::from_edges(2, [(0, 1, MAX_WEIGHT + 1)]),
            Err(Error::WeightTooLarge { .. })
        ));
    }

    #[test]
    fn min_distance_cases() {
        let c = Counters::new();
        let g = Graph::from_edges(3, [(0, 1, 3)]).unwrap();
        assert_eq!(min_distance(&g, 1, 1, &c).unwrap(), Distance::ZERO);
        assert_eq!(min_distance(&g, 0, 1, &c).unwrap(), Distance::new(3));
        assert_eq!(min_distance(&g, 1, 0, &c).unwrap(), Distance::new(3));
        assert_eq!(min_distance(&g, 0, 2, &c).unwrap(), Distance::INFINITY);
        assert!(min_distance(&g, 0, 9, &c).is_err());
    }

    #[test]
    fn extract_path_cases() {
        let g = path3();
        let c = Counters::new();
        let fwd = dijkstra(&g, 0, Direction::Forward, &c);
        assert_eq!(extract_path(&fwd, 0).unwrap(), vec![0]);
        assert_eq!(extract_path(&fwd, 2).unwrap(), vec![0, 1, 2]);
        let back = dijkstra(&g, 2, Direction::Backward, &c);
        assert_eq!(extract_path(&back, 0).unwrap(), vec![0, 1, 2]);
        let back0 = dijkstra(&g, 0, Direction::Backward, &c);
        assert!(matches!(
            extract_path(&back0, 2),
            Err(Error::Unreachable { from: 0, target: 2 })
        ));
    }

    #[test]
    fn distance_arithmetic_saturates() {
        assert_eq!(Distance::INFINITY + 5, Distance::INFINITY);
        assert_eq!(Distance::new(3) + Distance::new(4), Distance::new(7));
        assert!(Distance::INFINITY > Distance::new(u64::MAX - 1));
        assert_eq!(Distance::new(3).saturating_sub(5), Distance::ZERO);
        assert_eq!(Distance::INFINITY.saturating_sub(5), Distance::INFINITY);
        assert_eq!(serde_json::to_string(&Distance::INFINITY).unwrap(), "null");
        let back: Distance = serde_json::from_str("12").unwrap();
        assert_eq!(back, Distance::new(12));
    }

    #[test]
    fn induced_subgraph_relabels() {
        let g = Graph::from_edges(4, [(0, 1, 1), (1, 2, 2), (2, 3, 3), (3, 1, 4)]).unwrap();
        let mut local = vec![None; 4];
        let sub = g.induced_subgraph(&[3, 1, 2], &mut local);
        assert_eq!(sub.edges().collect::<Vec<_>>(), vec![(0, 1, 4), (1, 2, 2), (2, 0, 3)]);
        assert!(local.iter().all(Option::is_none));
    }

    #[test]
    fn pruning_drops_heavy_arcs() {
        let g = Graph::from_edges(3, [(0, 1, 1), (1, 2, 5)]).unwrap();
        let p = g.without_heavier_than(4);
        assert_eq!(p.edge_count(), 1);
        assert_eq!(p.vertex_count(), 3);
    }
}
