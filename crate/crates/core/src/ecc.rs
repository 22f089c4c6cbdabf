//! Per-vertex min-eccentricity estimates: a `(5 + delta)`-approximation for
//! positive weights and a `(3 + delta)`-approximation for unit weights.
//!
//! Each guess `rho` builds the radius layout and certifies every vertex it
//! can as having eccentricity at most a fixed multiple of `rho`. Vertices
//! certified for the first time are marked with that bound.

use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Counters, CounterSnapshot, Distance, DistanceField, Graph, Vertex};
use crate::partition::{side_of, Side};
use crate::radius::{
    check_delta, check_positive, distance_cutoff, guess_seed, GuessSchedule, RadiusLayout,
};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Weighted,
    Unweighted,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum Verdict {
    /// Eccentricity at most `3 rho`; found from a sample, an anchor or a
    /// partial search inside class `C_i`.
    Sample,
    Anchor,
    PartialSearch { class: usize },
    /// Eccentricity at most `bound` through the triangle bound around
    /// `via`, one of the consecutive anchors `a`, `b`: `d(via, s) <= gamma1`,
    /// `d(s, via) <= gamma2` and `eps(via) <= gamma3`.
    PairInterval {
        a: Vertex,
        b: Vertex,
        via: Vertex,
        gamma1: u64,
        gamma2: u64,
        gamma3: u64,
        bound: u64,
    },
    /// Eccentricity greater than `rho`.
    GreaterThanRho,
    /// Already marked in an earlier round and left out of the partial search.
    Skipped,
}

impl Verdict {
    pub fn is_certified(&self) -> bool {
        !matches!(self, Verdict::GreaterThanRho | Verdict::Skipped)
    }

    /// Certified by one of the rules shared with the radius procedure.
    pub fn is_three_rho(&self) -> bool {
        matches!(self, Verdict::Sample | Verdict::Anchor | Verdict::PartialSearch { .. })
    }

    /// Upper bound on the eccentricity implied at guess `rho`.
    pub fn bound(&self, rho: u64) -> Option<u64> {
        match *self {
            Verdict::PairInterval { bound, .. } => Some(bound),
            v if v.is_three_rho() => Some(3 * rho),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EccCertification {
    pub rho: u64,
    pub verdicts: Vec<Verdict>,
    pub samples: usize,
    pub supercomponents: usize,
    pub anchors: usize,
}

/// Anchor spacing used in unweighted mode: `delta' rho / 2`, at least one.
pub fn unweighted_gap(rho: u64, delta_prime: f64) -> u64 {
    ((delta_prime * rho as f64 / 2.0).floor() as u64).max(1)
}

/// Bound assigned when a vertex is certified at `rho`: `5 rho`, or
/// `(3 + delta') rho` rounded down in unweighted mode.
pub fn certified_estimate(mode: Mode, rho: u64, delta_prime: f64) -> u64 {
    match mode {
        Mode::Weighted => 5 * rho,
        Mode::Unweighted => ((3.0 + delta_prime) * rho as f64 + 1e-9).floor() as u64,
    }
}

fn check_mode(g: &Graph, mode: Mode) -> Result<()> {
    match mode {
        Mode::Weighted => Ok(()),
        Mode::Unweighted => g.require_unit_weights(),
    }
}

/// One certification round at guess `rho`. Vertices flagged in `skip` are
/// left out of the partial search.
pub fn certify_round(
    g: &Graph,
    rho: u64,
    mode: Mode,
    delta_prime: f64,
    seed_value: u64,
    skip: Option<&[bool]>,
    counters: &Counters,
) -> Result<EccCertification> {
    check_positive(g, rho)?;
    check_mode(g, mode)?;
    let n = g.vertex_count();
    if n == 1 {
        return Ok(EccCertification {
            rho,
            verdicts: vec![Verdict::Sample],
            samples: 0,
            supercomponents: 0,
            anchors: 0,
        });
    }
    let three = 3 * rho;
    let target = certified_estimate(mode, rho, delta_prime);
    let mut verdicts = vec![Verdict::GreaterThanRho; n];

    let mut layout = RadiusLayout::prepare(g, rho, seed_value, counters)?;
    for (s, &w) in layout.samples().iter().enumerate() {
        if layout.sample_eccentricity[s].within(three) {
            verdicts[w] = Verdict::Sample;
        }
    }

    layout.build_far();
    layout.build_close();
    let gap = match mode {
        Mode::Weighted => rho,
        Mode::Unweighted => unweighted_gap(rho, delta_prime),
    };
    layout.build_sparse_and_supercomponents(gap)?;
    if mode == Mode::Unweighted {
        let cap = (20.0 / delta_prime).ceil() as usize - 1;
        for e in &layout.sparse_edges {
            debug_assert!(e.anchors.len() - 2 <= cap, "{} anchors above cap {cap}", e.anchors.len() - 2);
        }
    }

    layout.anchor_pass(counters, |edge, fields| {
        let eccs: Vec<Distance> = fields.iter().map(|f| f.eccentricity()).collect();
        for (&a, e) in edge.anchors.iter().zip(&eccs) {
            if e.within(three) && !verdicts[a].is_certified() {
                verdicts[a] = Verdict::Anchor;
            }
        }
        for k in 0..edge.anchors.len() - 1 {
            let (a, b) = (edge.anchors[k], edge.anchors[k + 1]);
            let (fa, fb) = (fields[k], fields[k + 1]);
            let (ea, eb) = (eccs[k], eccs[k + 1]);
            if ea.is_infinite() && eb.is_infinite() {
                continue;
            }
            for s in 0..n {
                if verdicts[s].is_certified() {
                    continue;
                }
                let in_s_a = side_of(fa, s) == Some(Side::S) && fa.dist_to(s).within(rho);
                let in_t_b = side_of(fb, s) == Some(Side::T) && fb.dist_from(s).within(rho);
                if !(in_s_a && in_t_b) {
                    continue;
                }
                let around = |f: &DistanceField, e: Distance| {
                    (e + f.dist_from(s).max(f.dist_to(s)), f.source, f.dist_from(s), f.dist_to(s), e)
                };
                let best = around(fa, ea).min(around(fb, eb));
                let (total, via, g1, g2, g3) = best;
                if total.within(target) {
                    verdicts[s] = Verdict::PairInterval {
                        a,
                        b,
                        via,
                        gamma1: g1.raw(),
                        gamma2: g2.raw(),
                        gamma3: g3.raw(),
                        bound: target,
                    };
                }
            }
        }
        ControlFlow::Continue(())
    });

    layout.classify();
    for i in 0..layout.c_bar.len() {
        let mut candidates = Vec::new();
        for &v in &layout.c_bar[i] {
            if verdicts[v].is_certified() {
                continue;
            }
            if skip.is_some_and(|s| s[v]) {
                verdicts[v] = Verdict::Skipped;
            } else {
                candidates.push(v);
            }
        }
        let pass = layout.partial_search(i, &candidates, counters);
        for (&v, ok) in candidates.iter().zip(pass) {
            if ok {
                verdicts[v] = Verdict::PartialSearch { class: i };
            }
        }
    }

    Ok(EccCertification {
        rho,
        verdicts,
        samples: layout.samples().len(),
        supercomponents: layout.supercomponents.len(),
        anchors: layout.anchor_eccentricity.len(),
    })
}

/// Rechecks a certified verdict on the input graph: the eccentricity of
/// `s` is at most the stated bound, and pair certificates satisfy their
/// triangle hypotheses.
pub fn verify_verdict(g: &Graph, rho: u64, s: Vertex, verdict: &Verdict) -> bool {
    let Some(bound) = verdict.bound(rho) else {
        return true;
    };
    let counters = Counters::new();
    if !DistanceField::compute(g, s, &counters).eccentricity().within(bound) {
        return false;
    }
    match *verdict {
        Verdict::PairInterval {
            via,
            gamma1,
            gamma2,
            gamma3,
            ..
        } => {
            let f = DistanceField::compute(g, via, &counters);
            f.dist_from(s).within(gamma1)
                && f.dist_to(s).within(gamma2)
                && f.eccentricity().within(gamma3)
                && gamma3 + gamma1.max(gamma2) <= bound
        }
        _ => true,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundSummary {
    pub rho: u64,
    pub newly_marked: usize,
    pub three_rho: usize,
    pub pair_interval: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EccReport {
    pub eps_prime: Vec<Distance>,
    pub marked_at: Vec<Option<u64>>,
    pub rules: Vec<Option<Verdict>>,
    pub mode: Mode,
    pub delta: f64,
    pub delta_prime: f64,
    /// Smallest guess at which some vertex got a `3 rho` certificate.
    pub first_three_rho: Option<u64>,
    pub rounds: Vec<RoundSummary>,
    pub counters: CounterSnapshot,
    pub seed: u64,
}

pub fn approx_min_ecc(g: &Graph, delta: f64, mode: Mode, seed_value: u64, counters: &Counters) -> Result<EccReport> {
    check_delta(delta)?;
    g.require_positive_weights()?;
    check_mode(g, mode)?;
    let n = g.vertex_count();
    let delta_prime = delta / 5.0;
    let mut report = EccReport {
        eps_prime: vec![Distance::INFINITY; n],
        marked_at: vec![None; n],
        rules: vec![None; n],
        mode,
        delta,
        delta_prime,
        first_three_rho: None,
        rounds: Vec::new(),
        counters: CounterSnapshot::default(),
        seed: seed_value,
    };
    if n == 1 {
        report.eps_prime[0] = Distance::ZERO;
        report.counters = counters.snapshot();
        return Ok(report);
    }
    let Some(start) = g.min_weight() else {
        report.counters = counters.snapshot();
        return Ok(report);
    };
    let mut marked = vec![false; n];
    let mut remaining = n;
    for rho in GuessSchedule::new(start, distance_cutoff(g), delta_prime) {
        // Until some 3-rho certificate has appeared, marked vertices stay in
        // the partial search so its first success is never hidden.
        let skip = report.first_three_rho.is_some().then_some(marked.as_slice());
        let round = certify_round(g, rho, mode, delta_prime, guess_seed(seed_value, rho), skip, counters)?;
        let mut summary = RoundSummary {
            rho,
            newly_marked: 0,
            three_rho: 0,
            pair_interval: 0,
        };
        for (s, verdict) in round.verdicts.iter().enumerate() {
            if verdict.is_three_rho() {
                summary.three_rho += 1;
            }
            if matches!(verdict, Verdict::PairInterval { .. }) {
                summary.pair_interval += 1;
            }
            if verdict.is_certified() && !marked[s] {
                marked[s] = true;
                remaining -= 1;
                summary.newly_marked += 1;
                report.eps_prime[s] = Distance::new(certified_estimate(mode, rho, delta_prime));
                report.marked_at[s] = Some(rho);
                report.rules[s] = Some(*verdict);
            }
        }
        if summary.three_rho > 0 && report.first_three_rho.is_none() {
            report.first_three_rho = Some(rho);
        }
        report.rounds.push(summary);
        if remaining == 0 {
            break;
        }
    }
    report.counters = counters.snapshot();
    Ok(report)
}

/// Mode selected by the `--unweighted` flag.
pub fn parse_mode(unweighted: bool) -> Mode {
    if unweighted {
        Mode::Unweighted
    } else {
        Mode::Weighted
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "weighted" => Ok(Mode::Weighted),
            "unweighted" => Ok(Mode::Unweighted),
            other => Err(Error::InvalidParameter(format!("unknown mode `{other}`"))),
        }
    }
}
