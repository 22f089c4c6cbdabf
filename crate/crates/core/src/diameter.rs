//! Min-diameter approximation: the 3-approximation with `ceil(sqrt n)`
//! samples and the multi-level trade-off that recurses on augmented part
//! graphs.
//!
//! Every part is augmented with hub vertices whose arcs summarize detours
//! through the rest of the graph. The hub arcs never shorten a distance
//! below its true value and lengthen it by at most `2 D'` per hub.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{
    dijkstra, Counters, CounterSnapshot, Direction, Distance, DistanceField, Graph, Vertex,
};
use crate::partition::{balanced_partition, ceil_root, Partition, Side};
use crate::seed;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AugmentKind {
    S,
    T,
    Combined,
}

/// One part of a partition plus its hub vertices.
///
/// Local ids: `0..part.len()` follow `part`, then `hub_s`, then `hub_t`.
#[derive(Clone, Debug)]
pub struct AugmentedPartGraph {
    pub kind: AugmentKind,
    pub part: Vec<Vertex>,
    pub graph: Graph,
    pub hub_s: Option<Vertex>,
    pub hub_t: Option<Vertex>,
    pub d_prime: Distance,
}

/// `max(D', ...)` threshold: largest eccentricity among the samples.
pub fn sample_threshold(partition: &Partition) -> (Distance, Option<Vertex>) {
    partition
        .fields
        .iter()
        .map(|f| (f.eccentricity(), f.source))
        .max_by_key(|&(e, w)| (e, std::cmp::Reverse(w)))
        .map_or((Distance::ZERO, None), |(e, w)| (e, Some(w)))
}

impl AugmentedPartGraph {
    pub fn build(
        g: &Graph,
        partition: &Partition,
        part_index: usize,
        kind: AugmentKind,
        d_prime: Distance,
    ) -> Self {
        let part = partition.parts[part_index].clone();
        let p = part.len();
        let mut local = vec![None; g.vertex_count()];
        let mut arcs: Vec<_> = g.induced_subgraph(&part, &mut local).edges().collect();
        if p == 0 {
            arcs.clear();
        }
        let samples_on = |side: Side| -> Vec<usize> {
            (0..partition.samples.len())
                .filter(|&w| partition.part_side(w, part_index) == Some(side))
                .collect()
        };
        let mut next = p;
        let mut hub_s = None;
        let mut hub_t = None;

        if matches!(kind, AugmentKind::S | AugmentKind::Combined) {
            let ws = samples_on(Side::S);
            if !ws.is_empty() {
                let hub = next;
                next += 1;
                hub_s = Some(hub);
                for (x, &v) in part.iter().enumerate() {
                    arcs.push((x, hub, 0));
                    let best = ws
                        .iter()
                        .map(|&w| partition.fields[w].dist_from(v))
                        .min()
                        .expect("non-empty");
                    if let Some(weight) = best.saturating_sub(d_prime.raw()).finite() {
                        arcs.push((hub, x, weight));
                    }
                }
            }
        }
        if matches!(kind, AugmentKind::T | AugmentKind::Combined) {
            let wt = samples_on(Side::T);
            if !wt.is_empty() {
                let hub = next;
                next += 1;
                hub_t = Some(hub);
                for (x, &v) in part.iter().enumerate() {
                    arcs.push((hub, x, 0));
                    let best = wt
                        .iter()
                        .map(|&w| partition.fields[w].dist_to(v))
                        .min()
                        .expect("non-empty");
                    if let Some(weight) = best.saturating_sub(d_prime.raw()).finite() {
                        arcs.push((x, hub, weight));
                    }
                }
            }
        }
        AugmentedPartGraph {
            kind,
            part,
            graph: Graph::from_derived_arcs(next.max(1), arcs),
            hub_s,
            hub_t,
            d_prime,
        }
    }

    pub fn local(&self, v: Vertex) -> Option<Vertex> {
        self.part.binary_search(&v).ok()
    }
}

/// Distance from `u` to `v` inside the augmented graph, both given as
/// vertices of the original graph.
pub fn augmented_distance_check(
    aug: &AugmentedPartGraph,
    u: Vertex,
    v: Vertex,
    counters: &Counters,
) -> Result<Distance> {
    let lu = aug.local(u).ok_or_else(|| outside(u))?;
    let lv = aug.local(v).ok_or_else(|| outside(v))?;
    Ok(dijkstra(&aug.graph, lu, Direction::Forward, counters).dist[lv])
}

fn outside(v: Vertex) -> Error {
    Error::InvalidParameter(format!("vertex {v} is not in the part"))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum WitnessKind {
    /// Graph of one vertex.
    Trivial,
    /// Sample vertex whose eccentricity is the estimate.
    Center {
        vertex: Vertex,
        eccentricity: Distance,
    },
    /// Pair inside part `part` whose augmented min-distance is the estimate.
    Pair {
        part: usize,
        u: Vertex,
        v: Vertex,
        value: Distance,
    },
}

/// Witness of a diameter estimate. `descent` lists the part indices of the
/// recursion path; the vertex ids inside `kind` are local to the innermost
/// graph and `original` translates them back where possible (hub vertices
/// have no original counterpart).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiameterWitness {
    pub descent: Vec<usize>,
    pub kind: WitnessKind,
    pub original: Vec<Option<Vertex>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DiameterReport {
    pub estimate: Distance,
    pub level: usize,
    pub effective_level: usize,
    pub d_prime: Distance,
    pub sample_count: usize,
    pub part_sizes: Vec<usize>,
    pub witness: DiameterWitness,
    pub counters: CounterSnapshot,
    pub seed: u64,
}

fn ceil_log2(n: usize) -> usize {
    (usize::BITS - n.saturating_sub(1).leading_zeros()) as usize
}

fn effective_levels(n: usize, levels: usize) -> usize {
    levels.min(ceil_log2(n).max(1))
}

/// Number of samples at a given (effective) level.
pub fn sample_count(n: usize, levels: usize) -> usize {
    ceil_root(n, levels as u32 + 1).clamp(1, n.saturating_sub(1).max(1))
}

struct Level {
    partition: Partition,
    d_prime: Distance,
    center: Option<Vertex>,
    levels: usize,
}

fn setup(g: &Graph, levels: usize, seed_value: u64, counters: &Counters) -> Result<Level> {
    let n = g.vertex_count();
    let levels = effective_levels(n, levels);
    let q = sample_count(n, levels);
    let partition = balanced_partition(g, q, &mut seed::rng(seed_value), counters)?;
    let (d_prime, center) = sample_threshold(&partition);
    Ok(Level {
        partition,
        d_prime,
        center,
        levels,
    })
}

/// The top-level partition used by a run with these parameters.
pub fn top_partition(g: &Graph, levels: usize, seed_value: u64, counters: &Counters) -> Result<Partition> {
    if g.vertex_count() < 2 {
        return Err(Error::InvalidParameter("a partition needs at least two vertices".into()));
    }
    Ok(setup(g, levels.max(1), seed_value, counters)?.partition)
}

struct Estimate {
    value: Distance,
    witness: DiameterWitness,
    /// `D'`, sample count and part sizes of the level that produced it.
    layout: (Distance, usize, Vec<usize>),
}

fn part_all_pairs(
    g: &Graph,
    level: &Level,
    part_index: usize,
    counters: &Counters,
) -> Option<(Distance, Vertex, Vertex)> {
    let p = level.partition.parts[part_index].len();
    if p < 2 {
        return None;
    }
    let gs = AugmentedPartGraph::build(g, &level.partition, part_index, AugmentKind::S, level.d_prime);
    let gt = AugmentedPartGraph::build(g, &level.partition, part_index, AugmentKind::T, level.d_prime);
    let rows: Vec<Vec<Distance>> = (0..p)
        .into_par_iter()
        .map(|u| {
            let a = dijkstra(&gs.graph, u, Direction::Forward, counters);
            let b = dijkstra(&gt.graph, u, Direction::Forward, counters);
            (0..p).map(|v| a.dist[v].min(b.dist[v])).collect()
        })
        .collect();
    let mut best: Option<(Distance, Vertex, Vertex)> = None;
    for u in 0..p {
        for v in u + 1..p {
            let value = rows[u][v].min(rows[v][u]);
            if best.is_none_or(|(b, _, _)| value > b) {
                best = Some((value, u, v));
            }
        }
    }
    best
}

fn estimate(g: &Graph, levels: usize, seed_value: u64, counters: &Counters) -> Result<Estimate> {
    let n = g.vertex_count();
    if n == 1 {
        return Ok(Estimate {
            value: Distance::ZERO,
            witness: DiameterWitness {
                descent: Vec::new(),
                kind: WitnessKind::Trivial,
                original: Vec::new(),
            },
            layout: (Distance::ZERO, 0, vec![1]),
        });
    }
    let level = setup(g, levels, seed_value, counters)?;
    let center = level.center.expect("at least one sample");
    let center_witness = DiameterWitness {
        descent: Vec::new(),
        kind: WitnessKind::Center {
            vertex: center,
            eccentricity: level.d_prime,
        },
        original: vec![Some(center)],
    };
    let layout = (
        level.d_prime,
        level.partition.samples.len(),
        level.partition.part_sizes(),
    );
    if level.d_prime.is_infinite() {
        return Ok(Estimate {
            value: Distance::INFINITY,
            witness: center_witness,
            layout,
        });
    }

    let parts = level.partition.parts.len();
    let per_part: Vec<Option<Estimate>> = if level.levels == 1 {
        (0..parts)
            .into_par_iter()
            .map(|i| {
                part_all_pairs(g, &level, i, counters).map(|(value, u, v)| {
                    let part = &level.partition.parts[i];
                    Estimate {
                        value,
                        witness: DiameterWitness {
                            descent: Vec::new(),
                            kind: WitnessKind::Pair { part: i, u, v, value },
                            original: vec![Some(part[u]), Some(part[v])],
                        },
                        layout: (Distance::ZERO, 0, Vec::new()),
                    }
                })
            })
            .collect()
    } else {
        (0..parts)
            .into_par_iter()
            .map(|i| -> Result<Option<Estimate>> {
                if level.partition.parts[i].len() < 2 {
                    return Ok(None);
                }
                let aug = AugmentedPartGraph::build(
                    g,
                    &level.partition,
                    i,
                    AugmentKind::Combined,
                    level.d_prime,
                );
                let mut sub = estimate(
                    &aug.graph,
                    level.levels - 1,
                    seed::derive(seed_value, i as u64),
                    counters,
                )?;
                sub.witness.descent.insert(0, i);
                for slot in &mut sub.witness.original {
                    *slot = slot.and_then(|x| aug.part.get(x).copied());
                }
                Ok(Some(sub))
            })
            .collect::<Result<_>>()?
    };

    let mut value = level.d_prime;
    let mut witness = center_witness;
    for e in per_part.into_iter().flatten() {
        if e.value > value {
            value = e.value;
            witness = e.witness;
        }
    }
    Ok(Estimate {
        value,
        witness,
        layout,
    })
}

pub fn approx_diameter_3(g: &Graph, seed_value: u64, counters: &Counters) -> Result<DiameterReport> {
    approx_diameter_tradeoff(g, 1, seed_value, counters)
}

/// Estimate `D~` with `D / (4l - 1) <= D~ <= D`. The level is capped at
/// `ceil(log2 n)`.
pub fn approx_diameter_tradeoff(
    g: &Graph,
    levels: usize,
    seed_value: u64,
    counters: &Counters,
) -> Result<DiameterReport> {
    if levels == 0 {
        return Err(Error::InvalidParameter("levels must be at least 1".into()));
    }
    let n = g.vertex_count();
    let result = estimate(g, levels, seed_value, counters)?;
    let (d_prime, sample_count, part_sizes) = result.layout;
    Ok(DiameterReport {
        estimate: result.value,
        level: levels,
        effective_level: effective_levels(n, levels),
        d_prime,
        sample_count,
        part_sizes,
        witness: result.witness,
        counters: counters.snapshot(),
        seed: seed_value,
    })
}

/// Recomputes the witness value from scratch by replaying the recursion.
pub fn verify_witness(g: &Graph, report: &DiameterReport) -> Result<Distance> {
    let counters = Counters::new();
    let mut graph = g.clone();
    let mut levels = report.level;
    let mut seed_value = report.seed;
    for &i in &report.witness.descent {
        let level = setup(&graph, levels, seed_value, &counters)?;
        let aug = AugmentedPartGraph::build(
            &graph,
            &level.partition,
            i,
            AugmentKind::Combined,
            level.d_prime,
        );
        graph = aug.graph;
        levels = level.levels - 1;
        seed_value = seed::derive(seed_value, i as u64);
    }
    match &report.witness.kind {
        WitnessKind::Trivial => Ok(Distance::ZERO),
        WitnessKind::Center { vertex, .. } => {
            Ok(DistanceField::compute(&graph, *vertex, &counters).eccentricity())
        }
        WitnessKind::Pair { part, u, v, .. } => {
            let level = setup(&graph, levels, seed_value, &counters)?;
            let d = |a: Vertex, b: Vertex| -> Distance {
                [AugmentKind::S, AugmentKind::T]
                    .iter()
                    .map(|&kind| {
                        let aug =
                            AugmentedPartGraph::build(&graph, &level.partition, *part, kind, level.d_prime);
                        dijkstra(&aug.graph, a, Direction::Forward, &counters).dist[b]
                    })
                    .min()
                    .expect("two kinds")
            };
            Ok(d(*u, *v).min(d(*v, *u)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_vertex_is_zero() {
        let g = Graph::from_edges(1, []).unwrap();
        let r = approx_diameter_3(&g, 1, &Counters::new()).unwrap();
        assert_eq!(r.estimate, Distance::ZERO);
    }

    #[test]
    fn two_vertices_are_exact() {
        let g = Graph::from_edges(2, [(0, 1, 5)]).unwrap();
        for seed_value in 0..10 {
            let r = approx_diameter_3(&g, seed_value, &Counters::new()).unwrap();
            assert_eq!(r.estimate, Distance::new(5));
            assert_eq!(verify_witness(&g, &r).unwrap(), r.estimate);
        }
    }

    #[test]
    fn unit_clique_is_one_at_every_level() {
        let n = 12;
        let edges = (0..n).flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v, 1)));
        let g = Graph::from_edges(n, edges).unwrap();
        for levels in 1..=3 {
            let r = approx_diameter_tradeoff(&g, levels, 3, &Counters::new()).unwrap();
            assert_eq!(r.estimate, Distance::new(1));
        }
    }

    #[test]
    fn level_one_matches_three_approx() {
        let g = Graph::from_edges(6, [(0, 1, 2), (1, 2, 3), (2, 3, 1), (3, 4, 4), (4, 5, 1), (5, 0, 2)])
            .unwrap();
        let a = approx_diameter_3(&g, 11, &Counters::new()).unwrap();
        let b = approx_diameter_tradeoff(&g, 1, 11, &Counters::new()).unwrap();
        assert_eq!(a.estimate, b.estimate);
        assert_eq!(a.witness, b.witness);
    }

    #[test]
    fn missing_hubs_reduce_to_induced_distance() {
        let g = Graph::from_edges(3, [(0, 1, 1), (1, 2, 1), (2, 0, 1)]).unwrap();
        let c = Counters::new();
        let partition = balanced_partition(&g, 1, &mut seed::rng(0), &c).unwrap();
        for i in 0..partition.parts.len() {
            let aug = AugmentedPartGraph::build(&g, &partition, i, AugmentKind::S, Distance::new(1));
            if aug.hub_s.is_none() && !aug.part.is_empty() {
                let u = aug.part[0];
                assert_eq!(augmented_distance_check(&aug, u, u, &c).unwrap(), Distance::ZERO);
            }
        }
    }
}
