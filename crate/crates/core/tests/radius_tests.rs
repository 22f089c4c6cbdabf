mod common;

use common::*;
use mindist::oracle::exact_parameters;
use mindist::radius::{
    approx_min_radius, decide_radius, decide_radius_with_layout, scc_sparsify, subdivide_path, RadiusLayout,
    RadiusOutcome, Stage, VertexClass,
};
use mindist::scc::digraph_of;
use mindist::{Counters, Distance, Graph};
use proptest::prelude::*;
use rand::Rng;

fn layout_at(g: &Graph, r: u64, seed: u64) -> RadiusLayout {
    let c = Counters::new();
    let mut layout = RadiusLayout::prepare(g, r, seed, &c).unwrap();
    layout.build_far();
    layout.build_close();
    layout.build_sparse_and_supercomponents(r).unwrap();
    layout.anchor_pass(&c, |_, _| std::ops::ControlFlow::Continue(()));
    layout.classify();
    layout
}

fn guesses(radius: u64) -> Vec<u64> {
    let mut rs = vec![(radius / 2).max(1), radius, 2 * radius, 3 * radius];
    rs.dedup();
    rs
}

#[test]
fn decision_contract() {
    for seed in 0..25 {
        let g = strong_graph(seed, 2, 120, (1, 12));
        let exact = exact_parameters(&g, &Counters::new());
        let radius = exact.min_radius.raw();
        for r in guesses(radius) {
            let d = decide_radius(&g, r, seed, &Counters::new()).unwrap();
            match d.outcome {
                RadiusOutcome::Le3r { witness, eccentricity } => {
                    assert_eq!(eccentricity, exact.eccentricities[witness]);
                    assert!(eccentricity.within(3 * r));
                }
                RadiusOutcome::Gtr => assert!(radius > r, "seed {seed}: r {r} >= R {radius} rejected"),
            }
        }
    }
}

#[test]
fn supercomponent_order() {
    for seed in 0..15 {
        let g = strong_graph(seed, 10, 120, (1, 6));
        let radius = exact_parameters(&g, &Counters::new()).min_radius.raw();
        for r in guesses(radius) {
            let layout = layout_at(&g, r, seed);
            let d = floyd_warshall(&layout.pruned);
            for (i, wi) in layout.supercomponents.iter().enumerate() {
                for wj in &layout.supercomponents[i + 1..] {
                    for &a in wi {
                        for &b in wj {
                            assert!(!dist(d[b][a]).within(5 * r), "back edge {b} -> {a}");
                            assert!(layout.in_s_ball(a, b, 2 * r));
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn classes_match_their_patterns() {
    for seed in 0..15 {
        let g = strong_graph(seed, 10, 100, (1, 4));
        let radius = exact_parameters(&g, &Counters::new()).min_radius.raw();
        let layout = layout_at(&g, radius, seed);
        let k = layout.supercomponents.len();
        let two = 2 * radius;
        let t_of = |v, j: usize| layout.supercomponents[j].iter().all(|&w| layout.in_t_ball(v, w, two));
        let s_of = |v, j: usize| layout.supercomponents[j].iter().all(|&w| layout.in_s_ball(v, w, two));
        for v in g.vertices() {
            match layout.class[v] {
                VertexClass::Sample(j) => assert!(layout.supercomponents[j].contains(&v)),
                VertexClass::C(i) => {
                    assert!((0..i).all(|j| t_of(v, j)) && (i..k).all(|j| s_of(v, j)));
                }
                VertexClass::B(i) => {
                    assert!(!(0..=k).any(|p| (0..p).all(|j| t_of(v, j)) && (p..k).all(|j| s_of(v, j))));
                    if i > 0 {
                        assert!(t_of(v, i - 1));
                    }
                    assert!((i..k).all(|j| !t_of(v, j)));
                    // at most two exceptions on either side of the index
                    assert!((i..k).filter(|&j| !s_of(v, j)).count() <= 2);
                    assert!((0..k.min(i + 1)).filter(|&j| !t_of(v, j)).count() <= 2);
                }
            }
        }
    }
}

fn homogeneous(layout: &RadiusLayout, v: usize, members: &[usize]) -> bool {
    members.contains(&v)
        || members.iter().all(|&w| layout.in_s_ball(v, w, u64::MAX))
        || members.iter().all(|&w| layout.in_t_ball(v, w, u64::MAX))
}

#[test]
fn centers_are_side_homogeneous() {
    let mut reached = 0;
    for seed in 0..40 {
        let g = strong_graph(seed, 10, 100, (1, 4));
        let exact = exact_parameters(&g, &Counters::new());
        let r = exact.min_radius.raw();
        let layout = layout_at(&g, r, seed);
        let d = decide_radius(&g, r, seed, &Counters::new()).unwrap();
        let late = matches!(d.stage, Stage::PartialSearch | Stage::Exhausted);
        reached += usize::from(late);
        for v in g.vertices().filter(|&v| exact.eccentricities[v].within(r)) {
            for members in &layout.far_components {
                assert!(homogeneous(&layout, v, members), "seed {seed}: center {v}");
            }
            if late {
                for members in &layout.supercomponents {
                    assert!(homogeneous(&layout, v, members), "seed {seed}: center {v}");
                }
            }
        }
    }
    println!("{reached} runs reached the partial search");
}

#[test]
fn planted_center_is_found_by_the_partial_search() {
    let mut late = 0;
    for seed in 0..30 {
        let g = planted_center(seed, 40 + seed as usize * 3, 7);
        let exact = exact_parameters(&g, &Counters::new());
        let (d, layout) = decide_radius_with_layout(&g, 1, seed, &Counters::new()).unwrap();
        assert!(matches!(d.outcome, RadiusOutcome::Le3r { .. }), "seed {seed}: {:?}", d.stage);
        if matches!(d.stage, Stage::PartialSearch | Stage::Exhausted) {
            late += 1;
            let layout = layout.unwrap();
            for v in g.vertices().filter(|&v| exact.eccentricities[v].within(1)) {
                for members in &layout.supercomponents {
                    assert!(homogeneous(&layout, v, members), "seed {seed}: center {v}");
                }
            }
        }
    }
    assert!(late > 10, "only {late} runs reached the partial search");
}

#[test]
fn partial_search_sees_short_paths() {
    for seed in 0..10 {
        let g = strong_graph(seed, 10, 100, (1, 4));
        let r = exact_parameters(&g, &Counters::new()).min_radius.raw();
        let layout = layout_at(&g, r, seed);
        let d = floyd_warshall(&layout.pruned);
        for i in 0..layout.c_classes.len() {
            let (members, targets) = layout.window(i);
            let mut local = vec![None; g.vertex_count()];
            let sub = layout.pruned.induced_subgraph(&members, &mut local);
            let inner = floyd_warshall(&sub);
            let pos = |v| members.binary_search(&v).unwrap();
            for &u in &targets {
                for &x in &targets {
                    if dist(d[u][x]).within(r) {
                        assert_eq!(inner[pos(u)][pos(x)], d[u][x]);
                    }
                }
            }
        }
    }
}

#[test]
fn wrapper_bound() {
    for seed in 0..25 {
        let g = strong_graph(seed, 2, 120, (1, 9));
        let radius = exact_parameters(&g, &Counters::new()).min_radius;
        let report = approx_min_radius(&g, 0.5, seed, &Counters::new()).unwrap();
        let est = report.estimate.raw();
        assert!(radius <= report.estimate && est as f64 <= 3.5 * radius.raw() as f64, "{est} vs {radius}");
    }
}

#[test]
fn wrapper_reports_infinity_when_disconnected() {
    let g = Graph::from_edges(3, [(0, 1, 2), (1, 0, 2)]).unwrap();
    let report = approx_min_radius(&g, 0.5, 0, &Counters::new()).unwrap();
    assert_eq!(report.estimate, Distance::INFINITY);
}

#[test]
fn layout_is_returned_with_decision() {
    let g = strong_graph(8, 40, 40, (1, 3));
    let (d, layout) = decide_radius_with_layout(&g, 1, 3, &Counters::new()).unwrap();
    let layout = layout.unwrap();
    assert_eq!(d.far_components, layout.far_components.len());
}

#[test]
fn sparsified_sccs_stay_strong() {
    for seed in 0..100 {
        let g = strong_graph(seed, 1, 40, (1, 1));
        let adj = digraph_of(&g);
        let root = rng(seed).gen_range(0..g.vertex_count());
        let kept = scc_sparsify(&adj, root).unwrap();
        assert!(kept.len() <= 2 * (g.vertex_count() - 1));
        assert!(kept.iter().all(|&(u, v)| adj[u].contains(&v)));
        assert_eq!(scc_count(g.vertex_count(), &kept), 1);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn subdivision_gaps(weights in proptest::collection::vec(1u64..=6, 0..40), r in 6u64..20) {
        let total: u64 = weights.iter().sum();
        let z = total.div_ceil(r).max(1);
        let anchors = subdivide_path(&weights, r).unwrap();
        prop_assert!((anchors.len() as u64) < 2 * z);
        let mut cuts = vec![0];
        cuts.extend(&anchors);
        cuts.push(weights.len());
        for pair in cuts.windows(2) {
            prop_assert!(pair[0] < pair[1] || weights.is_empty());
            prop_assert!(weights[pair[0]..pair[1]].iter().sum::<u64>() <= r);
        }
    }
}
