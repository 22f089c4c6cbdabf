//! Min-radius: a decision procedure for a fixed guess `r` that either
//! proves `R > r` or finds a vertex of eccentricity at most `3r`, and a
//! geometric sweep over guesses giving a `(3 + delta)`-approximation.

pub mod helpers;
pub mod layout;

use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Counters, CounterSnapshot, Distance, DistanceField, Graph, Vertex};
use crate::seed;

pub use helpers::{scc_sparsify, subdivide_path};
pub use layout::{RadiusLayout, VertexClass};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    WCheck,
    SubdivisionCheck,
    PartialSearch,
    Exhausted,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum RadiusOutcome {
    /// `R <= 3r`, witnessed by a vertex whose eccentricity in the input
    /// graph was recomputed.
    Le3r { witness: Vertex, eccentricity: Distance },
    /// `R > r`.
    Gtr,
}

/// Dijkstra work per stage of one decision.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageCounts {
    pub partition: CounterSnapshot,
    pub subdivision: CounterSnapshot,
    pub partial_search: CounterSnapshot,
    pub verification: CounterSnapshot,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RadiusDecision {
    pub r: u64,
    pub outcome: RadiusOutcome,
    pub stage: Stage,
    pub far_components: usize,
    pub supercomponents: usize,
    pub stage_counts: StageCounts,
}

fn diff(after: CounterSnapshot, before: CounterSnapshot) -> CounterSnapshot {
    CounterSnapshot {
        dijkstra_runs: after.dijkstra_runs - before.dijkstra_runs,
        relaxations: after.relaxations - before.relaxations,
    }
}

pub(crate) fn check_positive(g: &Graph, r: u64) -> Result<()> {
    g.require_positive_weights()?;
    if r == 0 {
        return Err(Error::InvalidParameter("the guess must be positive".into()));
    }
    Ok(())
}

pub fn decide_radius(g: &Graph, r: u64, seed_value: u64, counters: &Counters) -> Result<RadiusDecision> {
    decide_radius_with_layout(g, r, seed_value, counters).map(|(d, _)| d)
}

/// As [`decide_radius`], also returning the layout built on the way. The
/// layout is `None` for single-vertex graphs and is only filled up to the
/// deciding stage.
pub fn decide_radius_with_layout(
    g: &Graph,
    r: u64,
    seed_value: u64,
    counters: &Counters,
) -> Result<(RadiusDecision, Option<RadiusLayout>)> {
    check_positive(g, r)?;
    let mut counts = StageCounts::default();
    let mut decision = RadiusDecision {
        r,
        outcome: RadiusOutcome::Le3r {
            witness: 0,
            eccentricity: Distance::ZERO,
        },
        stage: Stage::WCheck,
        far_components: 0,
        supercomponents: 0,
        stage_counts: counts,
    };
    if g.vertex_count() == 1 {
        return Ok((decision, None));
    }
    let limit = 3 * r;

    let start = counters.snapshot();
    let mut layout = RadiusLayout::prepare(g, r, seed_value, counters)?;
    counts.partition = diff(counters.snapshot(), start);

    let accept = |v: Vertex, stage: Stage, counts: &mut StageCounts| -> Option<RadiusOutcome> {
        let before = counters.snapshot();
        let eccentricity = DistanceField::compute(g, v, counters).eccentricity();
        counts.verification = diff(counters.snapshot(), before);
        debug_assert!(eccentricity.within(limit), "{stage:?} accepted {v} with {eccentricity}");
        eccentricity.within(limit).then_some(RadiusOutcome::Le3r {
            witness: v,
            eccentricity,
        })
    };

    // Step 1: a sample of small eccentricity.
    let best = (0..layout.samples().len())
        .filter(|&s| layout.sample_eccentricity[s].within(limit))
        .min_by_key(|&s| (layout.sample_eccentricity[s], s));
    if let Some(s) = best {
        if let Some(outcome) = accept(layout.samples()[s], Stage::WCheck, &mut counts) {
            decision.outcome = outcome;
            decision.stage_counts = counts;
            return Ok((decision, Some(layout)));
        }
    }

    // Steps 2 and 3a-b.
    layout.build_far();
    layout.build_close();
    layout.build_sparse_and_supercomponents(r)?;
    decision.far_components = layout.far_components.len();
    decision.supercomponents = layout.supercomponents.len();

    let before = counters.snapshot();
    let mut hit = None;
    layout.anchor_pass(counters, |edge, fields| {
        let found = edge
            .anchors
            .iter()
            .zip(fields)
            .find(|(_, f)| f.eccentricity().within(limit));
        match found {
            Some((&a, _)) => {
                hit = Some(a);
                ControlFlow::Break(())
            }
            None => ControlFlow::Continue(()),
        }
    });
    counts.subdivision = diff(counters.snapshot(), before);
    if let Some(a) = hit {
        if let Some(outcome) = accept(a, Stage::SubdivisionCheck, &mut counts) {
            decision.outcome = outcome;
            decision.stage = Stage::SubdivisionCheck;
            decision.stage_counts = counts;
            return Ok((decision, Some(layout)));
        }
    }

    // Steps 3c-d and 4.
    layout.classify();
    let before = counters.snapshot();
    let mut found = None;
    for i in 0..layout.c_bar.len() {
        let candidates = &layout.c_bar[i];
        let pass = layout.partial_search(i, candidates, counters);
        if let Some(pos) = pass.iter().position(|&p| p) {
            found = Some(candidates[pos]);
            break;
        }
    }
    counts.partial_search = diff(counters.snapshot(), before);
    if let Some(v) = found {
        if let Some(outcome) = accept(v, Stage::PartialSearch, &mut counts) {
            decision.outcome = outcome;
            decision.stage = Stage::PartialSearch;
            decision.stage_counts = counts;
            return Ok((decision, Some(layout)));
        }
    }
    decision.outcome = RadiusOutcome::Gtr;
    decision.stage = Stage::Exhausted;
    decision.stage_counts = counts;
    Ok((decision, Some(layout)))
}

/// Integer guesses `start, ...` growing by a factor `1 + delta_prime`
/// (at least by one) and ending exactly at `cutoff`.
#[derive(Clone, Debug)]
pub struct GuessSchedule {
    next: Option<u64>,
    cutoff: u64,
    delta_prime: f64,
}

impl GuessSchedule {
    pub fn new(start: u64, cutoff: u64, delta_prime: f64) -> Self {
        GuessSchedule {
            next: (start <= cutoff).then_some(start),
            cutoff,
            delta_prime,
        }
    }
}

impl Iterator for GuessSchedule {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        let cur = self.next?;
        let grown = (cur as f64 * self.delta_prime).floor() as u64;
        let step = cur.saturating_add(grown.max(1));
        self.next = if cur >= self.cutoff {
            None
        } else {
            Some(step.min(self.cutoff))
        };
        Some(cur)
    }
}

/// Largest value any finite distance can take: `n * w_max`.
pub fn distance_cutoff(g: &Graph) -> u64 {
    (g.vertex_count() as u64).saturating_mul(g.max_weight().unwrap_or(0))
}

pub fn check_delta(delta: f64) -> Result<()> {
    if delta > 0.0 && delta < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("delta must lie in (0, 1), got {delta}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GuessRecord {
    pub r: u64,
    pub stage: Stage,
    pub accepted: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RadiusReport {
    /// `R' = 3r` for the first accepted guess; infinite if none.
    pub estimate: Distance,
    pub accepted_r: Option<u64>,
    pub witness: Option<Vertex>,
    pub witness_eccentricity: Option<Distance>,
    pub final_decision: Option<RadiusDecision>,
    pub transcript: Vec<GuessRecord>,
    pub delta: f64,
    pub counters: CounterSnapshot,
    pub seed: u64,
}

/// Seed of the layout used for guess `r`, shared with the eccentricity
/// rounds so both pipelines see the same partition at the same guess.
pub fn guess_seed(seed_value: u64, r: u64) -> u64 {
    seed::derive(seed_value, r)
}

/// `R <= R' <= (3 + delta) R`.
pub fn approx_min_radius(g: &Graph, delta: f64, seed_value: u64, counters: &Counters) -> Result<RadiusReport> {
    check_delta(delta)?;
    g.require_positive_weights()?;
    let mut report = RadiusReport {
        estimate: Distance::ZERO,
        accepted_r: None,
        witness: Some(0),
        witness_eccentricity: Some(Distance::ZERO),
        final_decision: None,
        transcript: Vec::new(),
        delta,
        counters: CounterSnapshot::default(),
        seed: seed_value,
    };
    if g.vertex_count() == 1 {
        report.counters = counters.snapshot();
        return Ok(report);
    }
    report.estimate = Distance::INFINITY;
    report.witness = None;
    report.witness_eccentricity = None;
    let start = match g.min_weight() {
        Some(w) => w,
        None => {
            report.counters = counters.snapshot();
            return Ok(report);
        }
    };
    for r in GuessSchedule::new(start, distance_cutoff(g), delta / 3.0) {
        let decision = decide_radius(g, r, guess_seed(seed_value, r), counters)?;
        let accepted = matches!(decision.outcome, RadiusOutcome::Le3r { .. });
        report.transcript.push(GuessRecord {
            r,
            stage: decision.stage,
            accepted,
        });
        if let RadiusOutcome::Le3r { witness, eccentricity } = decision.outcome {
            report.estimate = Distance::new(3 * r);
            report.accepted_r = Some(r);
            report.witness = Some(witness);
            report.witness_eccentricity = Some(eccentricity);
            report.final_decision = Some(decision);
            break;
        }
        report.final_decision = Some(decision);
    }
    report.counters = counters.snapshot();
    Ok(report)
}
