//! Oracle comparison and the work-scaling benchmark.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::diameter::{approx_diameter_tradeoff, DiameterReport};
use crate::ecc::{approx_min_ecc, EccReport, Mode};
use crate::error::{Error, Result};
use crate::generate::{gen_random, Model};
use crate::graph::{Counters, Distance, Graph, Vertex};
use crate::oracle::{exact_parameters, ExactParameters, ORACLE_GUARD};
use crate::radius::{approx_min_radius, RadiusReport};
use crate::seed;

#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "algorithm", rename_all = "lowercase")]
pub enum Algorithm {
    Diam { levels: usize },
    Radius { delta: f64 },
    Ecc { delta: f64, mode: Mode },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", content = "report", rename_all = "lowercase")]
pub enum ApproxResult {
    Diam(DiameterReport),
    Radius(RadiusReport),
    Ecc(EccReport),
}

/// A vertex (or the whole graph, when `vertex` is absent) whose estimate
/// falls outside `[lower, upper]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub vertex: Option<Vertex>,
    pub exact: Distance,
    pub estimate: Distance,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Comparison {
    pub algorithm: Algorithm,
    pub exact: ExactParameters,
    pub approx: ApproxResult,
    /// Worst observed approximation ratio, `>= 1`; absent if undefined.
    pub ratio: Option<f64>,
    /// Largest ratio the guarantee allows.
    pub bound: f64,
    pub violations: Vec<Violation>,
    /// Per-vertex `estimate / exact` ratios in bins of width 0.5; only
    /// filled for eccentricities.
    pub ratio_histogram: Vec<RatioBin>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioBin {
    pub lower: f64,
    pub upper: f64,
    pub count: usize,
}

const BIN_WIDTH: f64 = 0.5;

/// Histogram of `estimate / exact` over the pairs where the ratio is defined.
pub fn ratio_histogram(pairs: impl IntoIterator<Item = (Distance, Distance)>) -> Vec<RatioBin> {
    let mut bins = std::collections::BTreeMap::new();
    for (exact, est) in pairs {
        let r = match (exact.finite(), est.finite()) {
            (None, None) => 1.0,
            (Some(a), Some(b)) if a > 0 => b as f64 / a as f64,
            (Some(0), Some(0)) => 1.0,
            _ => continue,
        };
        *bins.entry((r / BIN_WIDTH).floor() as u64).or_insert(0) += 1;
    }
    bins.into_iter()
        .map(|(k, count)| RatioBin {
            lower: k as f64 * BIN_WIDTH,
            upper: (k + 1) as f64 * BIN_WIDTH,
            count,
        })
        .collect()
}

/// Ratio between the larger and the smaller of two distances; infinite
/// pairs and zero pairs count as exact.
pub fn ratio(x: Distance, y: Distance) -> Option<f64> {
    let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
    match (lo.finite(), hi.finite()) {
        (None, None) => Some(1.0),
        (Some(0), Some(0)) => Some(1.0),
        (Some(0), _) | (Some(_), None) => None,
        (Some(a), Some(b)) => Some(b as f64 / a as f64),
        (None, Some(_)) => unreachable!(),
    }
}

/// `lower <= value <= factor * lower`, with infinity only matching infinity.
fn within_factor(lower: Distance, value: Distance, factor: f64) -> bool {
    match (lower.finite(), value.finite()) {
        (None, None) => true,
        (Some(a), Some(b)) => a <= b && (b as f64) <= factor * a as f64 + 1e-9,
        _ => false,
    }
}

pub fn guard(g: &Graph, force: bool) -> Result<()> {
    let n = g.vertex_count();
    if n > ORACLE_GUARD && !force {
        return Err(Error::OracleGuard { n, limit: ORACLE_GUARD });
    }
    Ok(())
}

pub fn compare(g: &Graph, algorithm: Algorithm, seed_value: u64, force: bool, counters: &Counters) -> Result<Comparison> {
    guard(g, force)?;
    let exact = exact_parameters(g, &Counters::new());
    let mut histogram = Vec::new();
    let (approx, bound, violations, worst) = match algorithm {
        Algorithm::Diam { levels } => {
            let report = approx_diameter_tradeoff(g, levels, seed_value, counters)?;
            let bound = (4 * levels - 1) as f64;
            let ok = within_factor(report.estimate, exact.min_diameter, bound);
            let violations = violation(ok, None, exact.min_diameter, report.estimate);
            let worst = ratio(exact.min_diameter, report.estimate);
            (ApproxResult::Diam(report), bound, violations, worst)
        }
        Algorithm::Radius { delta } => {
            let report = approx_min_radius(g, delta, seed_value, counters)?;
            let bound = 3.0 + delta;
            let ok = within_factor(exact.min_radius, report.estimate, bound);
            let violations = violation(ok, None, exact.min_radius, report.estimate);
            let worst = ratio(exact.min_radius, report.estimate);
            (ApproxResult::Radius(report), bound, violations, worst)
        }
        Algorithm::Ecc { delta, mode } => {
            let report = approx_min_ecc(g, delta, mode, seed_value, counters)?;
            let bound = match mode {
                Mode::Weighted => 5.0 + delta,
                Mode::Unweighted => 3.0 + delta,
            };
            let mut violations = Vec::new();
            let mut worst: Option<f64> = Some(1.0);
            for (v, (&e, &est)) in exact.eccentricities.iter().zip(&report.eps_prime).enumerate() {
                violations.extend(violation(within_factor(e, est, bound), Some(v), e, est));
                worst = match (worst, ratio(e, est)) {
                    (Some(a), Some(b)) => Some(a.max(b)),
                    _ => None,
                };
            }
            histogram = ratio_histogram(exact.eccentricities.iter().copied().zip(report.eps_prime.iter().copied()));
            (ApproxResult::Ecc(report), bound, violations, worst)
        }
    };
    Ok(Comparison {
        algorithm,
        exact,
        approx,
        ratio: worst,
        bound,
        pass: violations.is_empty(),
        violations,
        ratio_histogram: histogram,
    })
}

fn violation(ok: bool, vertex: Option<Vertex>, exact: Distance, estimate: Distance) -> Vec<Violation> {
    if ok {
        Vec::new()
    } else {
        vec![Violation { vertex, exact, estimate }]
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BenchConfig {
    pub sizes: Vec<usize>,
    /// Arcs per vertex.
    pub degree: usize,
    pub weights: (u64, u64),
    pub delta: f64,
    pub seed: u64,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            sizes: vec![64, 256, 1024],
            degree: 8,
            weights: (1, 10),
            delta: 0.5,
            seed: seed::DEFAULT_SEED,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub n: usize,
    pub m: usize,
    pub algorithm: String,
    pub relaxations_approx: u64,
    pub relaxations_oracle: u64,
    pub ratio: f64,
    pub approx_ms: f64,
    pub oracle_ms: f64,
}

/// Diameter (`l = 1`) and radius rows for every size, on strongly
/// connected graphs with `degree * n` arcs.
pub fn bench(config: &BenchConfig) -> Result<Vec<BenchRow>> {
    let mut rows = Vec::new();
    for &n in &config.sizes {
        let m = (config.degree * n).min(n * n.saturating_sub(1));
        let g = gen_random(n, m, config.weights, Model::StronglyConnected, seed::derive(config.seed, n as u64))?;
        let oracle = Counters::new();
        let start = Instant::now();
        exact_parameters(&g, &oracle);
        let oracle_ms = start.elapsed().as_secs_f64() * 1e3;
        let relaxations_oracle = oracle.snapshot().relaxations;

        let diam = Counters::new();
        let start = Instant::now();
        approx_diameter_tradeoff(&g, 1, config.seed, &diam)?;
        let diam_ms = start.elapsed().as_secs_f64() * 1e3;

        let radius = Counters::new();
        let start = Instant::now();
        approx_min_radius(&g, config.delta, config.seed, &radius)?;
        let radius_ms = start.elapsed().as_secs_f64() * 1e3;

        for (name, counters, ms) in [("diam", &diam, diam_ms), ("radius", &radius, radius_ms)] {
            let relaxations_approx = counters.snapshot().relaxations;
            rows.push(BenchRow {
                n,
                m: g.edge_count(),
                algorithm: name.to_string(),
                relaxations_approx,
                relaxations_oracle,
                ratio: relaxations_approx as f64 / relaxations_oracle.max(1) as f64,
                approx_ms: ms,
                oracle_ms,
            });
        }
    }
    Ok(rows)
}

pub fn bench_table(rows: &[BenchRow]) -> String {
    let mut out = format!(
        "{:>6} {:>7} {:>7} {:>14} {:>14} {:>8} {:>10} {:>10}\n",
        "n", "m", "alg", "relax_approx", "relax_oracle", "ratio", "approx_ms", "oracle_ms"
    );
    for r in rows {
        out.push_str(&format!(
            "{:>6} {:>7} {:>7} {:>14} {:>14} {:>8.4} {:>10.1} {:>10.1}\n",
            r.n, r.m, r.algorithm, r.relaxations_approx, r.relaxations_oracle, r.ratio, r.approx_ms, r.oracle_ms
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratios() {
        assert_eq!(ratio(Distance::new(2), Distance::new(6)), Some(3.0));
        assert_eq!(ratio(Distance::INFINITY, Distance::INFINITY), Some(1.0));
        assert_eq!(ratio(Distance::new(2), Distance::INFINITY), None);
        assert_eq!(ratio(Distance::ZERO, Distance::ZERO), Some(1.0));
    }

    #[test]
    fn factor_checks() {
        assert!(within_factor(Distance::new(2), Distance::new(7), 3.5));
        assert!(!within_factor(Distance::new(2), Distance::new(8), 3.5));
        assert!(!within_factor(Distance::new(3), Distance::new(2), 3.5));
        assert!(!within_factor(Distance::new(3), Distance::INFINITY, 3.5));
    }

    #[test]
    fn histogram_bins() {
        let d = Distance::new;
        let h = ratio_histogram([(d(2), d(2)), (d(2), d(3)), (d(1), d(1)), (Distance::INFINITY, Distance::INFINITY)]);
        assert_eq!(h.len(), 2);
        assert_eq!((h[0].lower, h[0].count), (1.0, 3));
        assert_eq!((h[1].lower, h[1].count), (1.5, 1));
    }

    #[test]
    fn empty_suite() {
        let config = BenchConfig {
            sizes: Vec::new(),
            ..BenchConfig::default()
        };
        assert!(bench(&config).unwrap().is_empty());
    }

    #[test]
    fn compare_passes_on_small_graph() {
        let g = gen_random(40, 160, (1, 4), Model::StronglyConnected, 3).unwrap();
        let c = Counters::new();
        for alg in [
            Algorithm::Diam { levels: 1 },
            Algorithm::Radius { delta: 0.5 },
            Algorithm::Ecc { delta: 0.5, mode: Mode::Weighted },
        ] {
            let out = compare(&g, alg, 1, false, &c).unwrap();
            assert!(out.pass, "{alg:?}: {:?}", out.violations);
        }
    }
}
