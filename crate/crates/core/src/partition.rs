//! Recursive randomized balanced partitioning around sampled splitters.
//!
//! A splitter `w` orders every other vertex as "before" it (`S`) or
//! "after" it (`T`) by comparing the two directed distances, falling back
//! to vertex ids on ties. Repeatedly splitting the largest part around a
//! balanced splitter yields parts that are pairwise separated by some
//! sample.

use log::warn;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Counters, DistanceField, Graph, Vertex};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    S,
    T,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::S => Side::T,
            Side::T => Side::S,
        }
    }
}

/// Side of `v` with respect to the field's source; `None` for the source.
pub fn side_of(field: &DistanceField, v: Vertex) -> Option<Side> {
    let w = field.source;
    if v == w {
        return None;
    }
    let (to_w, from_w) = (field.dist_to(v), field.dist_from(v));
    if to_w < from_w || (to_w == from_w && v < w) {
        Some(Side::S)
    } else {
        Some(Side::T)
    }
}

pub fn classify_sides(g: &Graph, w: Vertex, counters: &Counters) -> Vec<Option<Side>> {
    let field = DistanceField::compute(g, w, counters);
    g.vertices().map(|v| side_of(&field, v)).collect()
}

/// A chosen splitter together with its two parts of the split set.
#[derive(Clone, Debug)]
pub struct Splitter {
    pub vertex: Vertex,
    pub field: DistanceField,
    pub s_part: Vec<Vertex>,
    pub t_part: Vec<Vertex>,
    /// True when random sampling gave up and the deterministic scan chose.
    pub fallback: bool,
}

/// Factor-8 balance between the two sides.
pub fn is_balanced(s: usize, t: usize) -> bool {
    8 * s.min(t) >= s.max(t)
}

/// Sets up to this size skip sampling and take the most balanced vertex.
const SMALL_SET: usize = 9;

fn split_around(field: DistanceField, members: &[Vertex]) -> Splitter {
    let mut s_part = Vec::new();
    let mut t_part = Vec::new();
    for &v in members {
        match side_of(&field, v) {
            Some(Side::S) => s_part.push(v),
            Some(Side::T) => t_part.push(v),
            None => {}
        }
    }
    Splitter {
        vertex: field.source,
        field,
        s_part,
        t_part,
        fallback: false,
    }
}

fn ceil_log2(n: usize) -> usize {
    (usize::BITS - n.saturating_sub(1).leading_zeros()) as usize
}

/// Samples a splitter for `members` (sorted) whose sides are balanced
/// within factor 8. `n` is the size of the whole graph and sets the batch
/// size `ceil(log2 n)^2`.
pub fn sample_splitter<R: Rng>(
    g: &Graph,
    members: &[Vertex],
    rng: &mut R,
    max_rounds: usize,
    counters: &Counters,
) -> Result<Splitter> {
    if members.len() < 2 {
        return Err(Error::InvalidParameter(format!(
            "a splitter needs at least two vertices, got {}",
            members.len()
        )));
    }
    if members.len() <= SMALL_SET {
        let mut best: Option<(usize, Splitter)> = None;
        for &w in members {
            let split = split_around(DistanceField::compute(g, w, counters), members);
            let score = split.s_part.len().min(split.t_part.len());
            if best.as_ref().is_none_or(|(b, _)| score > *b) {
                best = Some((score, split));
            }
        }
        return Ok(best.expect("non-empty set").1);
    }

    let log = ceil_log2(g.vertex_count()).max(1);
    let batch = log * log;
    for _ in 0..max_rounds {
        for _ in 0..batch {
            let w = *members.choose(rng).expect("non-empty set");
            let split = split_around(DistanceField::compute(g, w, counters), members);
            if is_balanced(split.s_part.len(), split.t_part.len()) {
                return Ok(split);
            }
        }
    }
    warn!(
        "no balanced splitter among {} samples of a {}-vertex set; scanning",
        max_rounds * batch,
        members.len()
    );
    for &w in members {
        let mut split = split_around(DistanceField::compute(g, w, counters), members);
        if is_balanced(split.s_part.len(), split.t_part.len()) {
            split.fallback = true;
            return Ok(split);
        }
    }
    unreachable!("more than half of any set admits a balanced split");
}

/// Sample set, ordered parts and the cached fields of every sample.
#[derive(Clone, Debug)]
pub struct Partition {
    pub samples: Vec<Vertex>,
    pub parts: Vec<Vec<Vertex>>,
    /// Part index of every non-sample vertex.
    pub part_of: Vec<Option<usize>>,
    /// Position in `samples`, for sample vertices.
    pub sample_index: Vec<Option<usize>>,
    /// `fields[i]` belongs to `samples[i]`.
    pub fields: Vec<DistanceField>,
    /// For each part, the splitters it descends from and the side taken.
    pub lineage: Vec<Vec<(usize, Side)>>,
    pub fallbacks: usize,
}

impl Partition {
    pub fn vertex_count(&self) -> usize {
        self.part_of.len()
    }

    pub fn side(&self, sample: usize, v: Vertex) -> Option<Side> {
        side_of(&self.fields[sample], v)
    }

    /// Side shared by every vertex of the part, if the part is homogeneous
    /// with respect to the sample. Empty parts report `None`.
    pub fn part_side(&self, sample: usize, part: usize) -> Option<Side> {
        let members = &self.parts[part];
        let first = self.side(sample, *members.first()?)?;
        members
            .iter()
            .all(|&v| self.side(sample, v) == Some(first))
            .then_some(first)
    }

    /// Some sample with one part wholly on its `S` side and the other on
    /// its `T` side.
    pub fn separation_witness(&self, a: usize, b: usize) -> Option<usize> {
        (0..self.samples.len()).find(|&w| {
            let (sa, sb) = (self.part_side(w, a), self.part_side(w, b));
            let a_empty = self.parts[a].is_empty();
            let b_empty = self.parts[b].is_empty();
            match (sa, sb) {
                (Some(x), Some(y)) => x != y,
                _ => (a_empty && sb.is_some()) || (b_empty && sa.is_some()) || (a_empty && b_empty),
            }
        })
    }

    pub fn part_sizes(&self) -> Vec<usize> {
        self.parts.iter().map(Vec::len).collect()
    }
}

/// `q` splits of the currently largest part, `1 <= q < n`.
pub fn balanced_partition<R: Rng>(
    g: &Graph,
    q: usize,
    rng: &mut R,
    counters: &Counters,
) -> Result<Partition> {
    let n = g.vertex_count();
    if q == 0 || q >= n {
        return Err(Error::InvalidParameter(format!(
            "partition needs 1 <= q < n, got q = {q}, n = {n}"
        )));
    }
    let max_rounds = ceil_log2(n).max(1);
    let mut parts: Vec<Vec<Vertex>> = vec![g.vertices().collect()];
    let mut lineage: Vec<Vec<(usize, Side)>> = vec![Vec::new()];
    let mut samples = Vec::with_capacity(q);
    let mut fields = Vec::with_capacity(q);
    let mut fallbacks = 0;

    for step in 0..q {
        // largest part, first on ties
        let target = (0..parts.len())
            .max_by_key(|&i| (parts[i].len(), std::cmp::Reverse(i)))
            .expect("at least one part");
        let members = std::mem::take(&mut parts[target]);
        let split = if members.len() >= 2 {
            sample_splitter(g, &members, rng, max_rounds, counters)?
        } else {
            // A single vertex left; it becomes the splitter of two empty parts.
            Splitter {
                vertex: members[0],
                field: DistanceField::compute(g, members[0], counters),
                s_part: Vec::new(),
                t_part: Vec::new(),
                fallback: false,
            }
        };
        fallbacks += usize::from(split.fallback);
        let mut history = lineage[target].clone();
        history.push((step, Side::T));
        lineage[target].push((step, Side::S));
        parts[target] = split.s_part;
        parts.push(split.t_part);
        lineage.push(history);
        samples.push(split.vertex);
        fields.push(split.field);
    }

    let mut part_of = vec![None; n];
    for (i, part) in parts.iter().enumerate() {
        for &v in part {
            part_of[v] = Some(i);
        }
    }
    let mut sample_index = vec![None; n];
    for (i, &w) in samples.iter().enumerate() {
        sample_index[w] = Some(i);
    }
    Ok(Partition {
        samples,
        parts,
        part_of,
        sample_index,
        fields,
        lineage,
        fallbacks,
    })
}

/// Smallest `q` with `q^k >= n`.
pub fn ceil_root(n: usize, k: u32) -> usize {
    if n <= 1 {
        return n;
    }
    let mut q = (n as f64).powf(1.0 / k as f64).floor().max(1.0) as usize;
    while q > 1 && (q - 1).checked_pow(k).is_some_and(|p| p >= n) {
        q -= 1;
    }
    while q.checked_pow(k).is_some_and(|p| p < n) {
        q += 1;
    }
    q
}

pub fn ceil_sqrt(n: usize) -> usize {
    ceil_root(n, 2)
}
