//! The layered structure built for one radius guess `r`, shared by the
//! radius decision procedure and the eccentricity certification rounds.
//!
//! Construction order: prune arcs heavier than `r`, partition, group the
//! samples by the far graph, link the groups by the close graph, subdivide
//! the realized close paths, order the strongly connected groups into
//! supercomponents and finally classify every other vertex.

use std::collections::BTreeMap;
use std::ops::ControlFlow;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::graph::{extract_path, Counters, Distance, DistanceField, Graph, Vertex};
use crate::partition::{balanced_partition, ceil_sqrt, side_of, Partition, Side};
use crate::radius::helpers::{scc_sparsify, subdivide_path};
use crate::scc::components_topological;
use crate::seed;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "index", rename_all = "snake_case")]
pub enum VertexClass {
    /// Sample vertex in the given supercomponent.
    Sample(usize),
    /// Candidate class `C_i`.
    C(usize),
    /// Residual class `B_i`.
    B(usize),
}

/// Arc of the close graph between far components `from` and `to`, with
/// the sample pair realising the smallest directed distance.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CloseEdge {
    pub from: usize,
    pub to: usize,
    pub u: Vertex,
    pub v: Vertex,
    pub dist: Distance,
}

/// A kept close arc with its realized path and anchor sequence. `anchors`
/// starts at the path source and ends at the path target.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SparseEdge {
    pub close: usize,
    pub path: Vec<Vertex>,
    pub anchors: Vec<Vertex>,
}

#[derive(Clone, Debug)]
pub struct RadiusLayout {
    pub r: u64,
    pub pruned: Graph,
    pub partition: Partition,
    pub sample_eccentricity: Vec<Distance>,
    /// `F_i`: samples grouped by far-graph component.
    pub far_components: Vec<Vec<Vertex>>,
    /// Far component of each sample, by sample index.
    pub far_of_sample: Vec<usize>,
    pub close_edges: Vec<CloseEdge>,
    pub sparse_edges: Vec<SparseEdge>,
    /// Eccentricity (pruned graph) of every anchor examined so far.
    pub anchor_eccentricity: BTreeMap<Vertex, Distance>,
    /// `W_1..W_k` in topological order.
    pub supercomponents: Vec<Vec<Vertex>>,
    /// Supercomponent of each sample, by sample index.
    pub super_of_sample: Vec<usize>,
    pub class: Vec<VertexClass>,
    pub c_classes: Vec<Vec<Vertex>>,
    pub b_classes: Vec<Vec<Vertex>>,
    /// Vertices of `C_i` within min-distance `r` of every sample.
    pub c_bar: Vec<Vec<Vertex>>,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

impl RadiusLayout {
    /// Prunes, partitions with `ceil(sqrt n)` samples and records the
    /// sample eccentricities. Requires at least two vertices.
    pub fn prepare(g: &Graph, r: u64, seed_value: u64, counters: &Counters) -> Result<Self> {
        let pruned = g.without_heavier_than(r);
        let n = pruned.vertex_count();
        let q = ceil_sqrt(n).clamp(1, n - 1);
        let partition = balanced_partition(&pruned, q, &mut seed::rng(seed_value), counters)?;
        let sample_eccentricity = partition.fields.iter().map(|f| f.eccentricity()).collect();
        Ok(RadiusLayout {
            r,
            pruned,
            partition,
            sample_eccentricity,
            far_components: Vec::new(),
            far_of_sample: Vec::new(),
            close_edges: Vec::new(),
            sparse_edges: Vec::new(),
            anchor_eccentricity: BTreeMap::new(),
            supercomponents: Vec::new(),
            super_of_sample: Vec::new(),
            class: Vec::new(),
            c_classes: Vec::new(),
            b_classes: Vec::new(),
            c_bar: Vec::new(),
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.pruned.vertex_count()
    }

    pub fn samples(&self) -> &[Vertex] {
        &self.partition.samples
    }

    pub fn field(&self, sample: usize) -> &DistanceField {
        &self.partition.fields[sample]
    }

    /// Far graph: a sample and any vertex are adjacent when their
    /// min-distance exceeds `2r`. Groups the samples by component.
    pub fn build_far(&mut self) {
        let n = self.vertex_count();
        let limit = 2 * self.r;
        let mut uf = UnionFind((0..n).collect());
        for field in &self.partition.fields {
            for v in 0..n {
                if !field.min_distance(v).within(limit) {
                    uf.union(field.source, v);
                }
            }
        }
        let mut by_root: BTreeMap<usize, usize> = BTreeMap::new();
        self.far_components.clear();
        self.far_of_sample.clear();
        for &w in &self.partition.samples {
            let root = uf.find(w);
            let id = *by_root.entry(root).or_insert_with(|| {
                self.far_components.push(Vec::new());
                self.far_components.len() - 1
            });
            self.far_components[id].push(w);
            self.far_of_sample.push(id);
        }
    }

    /// Close graph: `F_a -> F_b` when some pair has `d(u, v) <= 5r`.
    pub fn build_close(&mut self) {
        let limit = 5 * self.r;
        let p = &self.partition;
        self.close_edges.clear();
        for a in 0..self.far_components.len() {
            for b in 0..self.far_components.len() {
                if a == b {
                    continue;
                }
                let mut best: Option<(Distance, Vertex, Vertex)> = None;
                for &u in &self.far_components[a] {
                    let field = &p.fields[p.sample_index[u].expect("sample")];
                    for &v in &self.far_components[b] {
                        let d = field.dist_from(v);
                        if d.within(limit) && best.is_none_or(|(bd, _, _)| d < bd) {
                            best = Some((d, u, v));
                        }
                    }
                }
                if let Some((dist, u, v)) = best {
                    self.close_edges.push(CloseEdge {
                        from: a,
                        to: b,
                        u,
                        v,
                        dist,
                    });
                }
            }
        }
    }

    fn close_adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.far_components.len()];
        for e in &self.close_edges {
            adj[e.from].push(e.to);
        }
        adj
    }

    /// Sparsifies every strongly connected component of the close graph
    /// and realizes each kept arc as a tree path cut into pieces of length
    /// at most `gap`. Also orders the components into supercomponents.
    pub fn build_sparse_and_supercomponents(&mut self, gap: u64) -> Result<()> {
        let adj = self.close_adjacency();
        let sccs = components_topological(&adj);
        let index: BTreeMap<(usize, usize), usize> = self
            .close_edges
            .iter()
            .enumerate()
            .map(|(i, e)| ((e.from, e.to), i))
            .collect();
        self.sparse_edges.clear();
        for comp in &sccs {
            if comp.len() < 2 {
                continue;
            }
            let local: BTreeMap<usize, usize> =
                comp.iter().enumerate().map(|(i, &f)| (f, i)).collect();
            let sub: Vec<Vec<usize>> = comp
                .iter()
                .map(|&f| adj[f].iter().filter_map(|t| local.get(t).copied()).collect())
                .collect();
            for (a, b) in scc_sparsify(&sub, 0)? {
                let close = index[&(comp[a], comp[b])];
                self.sparse_edges.push(self.realize(close, gap)?);
            }
        }

        self.supercomponents.clear();
        self.super_of_sample = vec![0; self.partition.samples.len()];
        let mut super_of_far = vec![0; self.far_components.len()];
        for (j, comp) in sccs.iter().enumerate() {
            let mut members: Vec<Vertex> = comp
                .iter()
                .flat_map(|&f| self.far_components[f].iter().copied())
                .collect();
            members.sort_unstable();
            for &f in comp {
                super_of_far[f] = j;
            }
            self.supercomponents.push(members);
        }
        for (s, &f) in self.far_of_sample.iter().enumerate() {
            self.super_of_sample[s] = super_of_far[f];
        }
        Ok(())
    }

    fn realize(&self, close: usize, gap: u64) -> Result<SparseEdge> {
        let e = &self.close_edges[close];
        let p = &self.partition;
        let field = &p.fields[p.sample_index[e.u].expect("sample")];
        let path = extract_path(&field.from, e.v)?;
        let weights: Vec<u64> = path
            .windows(2)
            .map(|w| field.dist_from(w[1]).raw() - field.dist_from(w[0]).raw())
            .collect();
        let mut anchors = vec![path[0]];
        anchors.extend(subdivide_path(&weights, gap)?.into_iter().map(|i| path[i]));
        anchors.push(*path.last().expect("non-empty path"));
        Ok(SparseEdge {
            close,
            path,
            anchors,
        })
    }

    /// Visits every sparse edge in order with the distance fields of its
    /// anchors. Sample fields are reused; others are computed in parallel.
    pub fn anchor_pass<F>(&mut self, counters: &Counters, mut visit: F)
    where
        F: FnMut(&SparseEdge, &[&DistanceField]) -> ControlFlow<()>,
    {
        let edges = std::mem::take(&mut self.sparse_edges);
        for edge in &edges {
            let fresh: Vec<Option<DistanceField>> = edge
                .anchors
                .par_iter()
                .map(|&a| {
                    self.partition.sample_index[a]
                        .is_none()
                        .then(|| DistanceField::compute(&self.pruned, a, counters))
                })
                .collect();
            let fields: Vec<&DistanceField> = edge
                .anchors
                .iter()
                .zip(&fresh)
                .map(|(&a, f)| match f {
                    Some(f) => f,
                    None => &self.partition.fields[self.partition.sample_index[a].unwrap()],
                })
                .collect();
            for (&a, f) in edge.anchors.iter().zip(&fields) {
                self.anchor_eccentricity.entry(a).or_insert_with(|| f.eccentricity());
            }
            if visit(edge, &fields).is_break() {
                break;
            }
        }
        self.sparse_edges = edges;
    }

    /// Assigns every non-sample vertex to one `C_i` or `B_i` from the
    /// cached sample distances, and collects `C_bar`.
    pub fn classify(&mut self) {
        let n = self.vertex_count();
        let k = self.supercomponents.len();
        let limit = 2 * self.r;
        let p = &self.partition;
        let classes: Vec<VertexClass> = (0..n)
            .into_par_iter()
            .map(|v| {
                if let Some(s) = p.sample_index[v] {
                    return VertexClass::Sample(self.super_of_sample[s]);
                }
                let mut in_t = vec![false; k];
                let mut in_s = vec![false; k];
                for (j, members) in self.supercomponents.iter().enumerate() {
                    in_t[j] = members.iter().all(|&w| {
                        let f = &p.fields[p.sample_index[w].unwrap()];
                        side_of(f, v) == Some(Side::T) && f.dist_from(v).within(limit)
                    });
                    in_s[j] = members.iter().all(|&w| {
                        let f = &p.fields[p.sample_index[w].unwrap()];
                        side_of(f, v) == Some(Side::S) && f.dist_to(v).within(limit)
                    });
                }
                let prefix = in_t.iter().take_while(|&&t| t).count();
                if in_s[prefix..].iter().all(|&s| s) {
                    VertexClass::C(prefix)
                } else {
                    VertexClass::B(in_t.iter().rposition(|&t| t).map_or(0, |j| j + 1))
                }
            })
            .collect();
        self.c_classes = vec![Vec::new(); k + 1];
        self.b_classes = vec![Vec::new(); k + 1];
        self.c_bar = vec![Vec::new(); k + 1];
        for (v, &c) in classes.iter().enumerate() {
            match c {
                VertexClass::C(i) => {
                    self.c_classes[i].push(v);
                    if p.fields.iter().all(|f| f.min_distance(v).within(self.r)) {
                        self.c_bar[i].push(v);
                    }
                }
                VertexClass::B(i) => self.b_classes[i].push(v),
                VertexClass::Sample(_) => {}
            }
        }
        self.class = classes;
    }

    /// Vertex set of the partial search graph `G_i` and the target set
    /// `U_i`, both sorted. Window indices are clamped to the valid range.
    pub fn window(&self, i: usize) -> (Vec<Vertex>, Vec<Vertex>) {
        let k = self.supercomponents.len();
        let span = |lo: isize, hi: isize, len: usize| {
            let lo = lo.max(0) as usize;
            let hi = (hi.max(-1) + 1).min(len as isize).max(0) as usize;
            lo..hi.max(lo)
        };
        let i = i as isize;
        let mut members = Vec::new();
        for j in span(i - 6, i + 3, k) {
            members.extend_from_slice(&self.supercomponents[j]);
        }
        for j in span(i - 6, i + 3, k + 1) {
            members.extend_from_slice(&self.b_classes[j]);
        }
        for j in span(i - 5, i + 3, k + 1) {
            members.extend_from_slice(&self.c_classes[j]);
        }
        members.sort_unstable();
        let mut targets = self.c_classes[i as usize].clone();
        for j in span(i - 2, i, k + 1) {
            targets.extend_from_slice(&self.b_classes[j]);
        }
        targets.sort_unstable();
        (members, targets)
    }

    /// Runs Dijkstra from and to each candidate inside `G_i` and reports
    /// whether it is within min-distance `r` of every vertex of `U_i`.
    pub fn partial_search(&self, i: usize, candidates: &[Vertex], counters: &Counters) -> Vec<bool> {
        if candidates.is_empty() {
            return Vec::new();
        }
        let (members, targets) = self.window(i);
        let mut local = vec![None; self.vertex_count()];
        let sub = self.pruned.induced_subgraph(&members, &mut local);
        let position = |v: Vertex| members.binary_search(&v).expect("window member");
        let target_local: Vec<usize> = targets.iter().map(|&u| position(u)).collect();
        candidates
            .par_iter()
            .map(|&c| {
                let field = DistanceField::compute(&sub, position(c), counters);
                target_local
                    .iter()
                    .all(|&u| field.min_distance(u).within(self.r))
            })
            .collect()
    }

    /// Sample-side helpers for invariant checks.
    pub fn in_s_ball(&self, v: Vertex, w: Vertex, limit: u64) -> bool {
        let f = &self.partition.fields[self.partition.sample_index[w].expect("sample")];
        side_of(f, v) == Some(Side::S) && f.dist_to(v).within(limit)
    }

    pub fn in_t_ball(&self, v: Vertex, w: Vertex, limit: u64) -> bool {
        let f = &self.partition.fields[self.partition.sample_index[w].expect("sample")];
        side_of(f, v) == Some(Side::T) && f.dist_from(v).within(limit)
    }
}
