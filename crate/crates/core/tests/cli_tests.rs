mod common;

use std::path::Path;
use std::process::{Command, Output};

use common::*;
use mindist::compare::{compare, Algorithm};
use mindist::ecc::Mode;
use mindist::{dimacs, Counters};
use serde_json::Value;

fn mindist(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mindist"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json report")
}

fn gen(dir: &Path, name: &str, extra: &[&str]) -> String {
    let path = dir.join(name).to_string_lossy().into_owned();
    let mut args = vec!["gen", "--out", &path];
    args.extend_from_slice(extra);
    let out = mindist(&args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    path
}

#[test]
fn gen_is_deterministic_and_strong() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["--n", "50", "--m", "200", "--max-weight", "9", "--seed", "4"];
    let a = gen(dir.path(), "a.gr", &args);
    let b = gen(dir.path(), "b.gr", &args);
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    let g = dimacs::read_graph(Path::new(&a)).unwrap();
    assert_eq!((g.vertex_count(), g.edge_count()), (50, 200));
    assert!(is_strong(&g));
}

#[test]
fn gen_rejects_infeasible_sizes() {
    let out = mindist(&["gen", "--n", "3", "--m", "9"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn reports_carry_schema_and_counters() {
    let dir = tempfile::tempdir().unwrap();
    let g = gen(dir.path(), "g.gr", &["--n", "60", "--m", "240", "--max-weight", "5"]);
    for cmd in [
        vec!["exact", &g],
        vec!["diam", "--levels", "2", "--compare", &g],
        vec!["radius", "--delta", "0.5", "--compare", &g],
        vec!["ecc", "--delta", "0.5", "--compare", &g],
        vec!["compare", &g],
    ] {
        let out = mindist(&cmd);
        assert_eq!(out.status.code(), Some(0), "{cmd:?}: {}", String::from_utf8_lossy(&out.stderr));
        let v = json(&out);
        assert_eq!(v["schema"], 1);
        assert_eq!(v["command"], cmd[0]);
        assert!(v["counters"]["relaxations"].as_u64().unwrap() > 0);
    }
}

#[test]
fn diam_matches_exact_bounds_and_dumps_partition() {
    let dir = tempfile::tempdir().unwrap();
    let g = gen(dir.path(), "g.gr", &["--n", "80", "--m", "400", "--max-weight", "7", "--seed", "2"]);
    let exact = json(&mindist(&["exact", &g]));
    let diam = json(&mindist(&["diam", "--dump-partition", "--seed", "3", &g]));
    let d = exact["result"]["min_diameter"].as_u64().unwrap();
    let est = diam["result"]["estimate"].as_u64().unwrap();
    assert!(est <= d && 3 * est >= d);
    let p = &diam["result"]["partition"];
    assert_eq!(p["samples"].as_array().unwrap().len(), 9);
    assert!(p["separation"].as_array().unwrap().iter().all(|e| !e["witness"].is_null()));
}

#[test]
fn text_format_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let g = gen(dir.path(), "g.gr", &["--n", "30", "--m", "90"]);
    let report = dir.path().join("r.txt").to_string_lossy().into_owned();
    let out = mindist(&["radius", "--format", "text", "--out", &report, &g]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&report).unwrap();
    assert!(text.starts_with("min_radius_estimate"));
}

#[test]
fn input_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.gr");
    std::fs::write(&bad, "p sp 2 1\na 1 2 -4\n").unwrap();
    let bad = bad.to_string_lossy().into_owned();
    assert_eq!(mindist(&["exact", &bad]).status.code(), Some(1));
    assert_eq!(mindist(&["diam", "/nonexistent/graph.gr"]).status.code(), Some(1));
    let g = gen(dir.path(), "g.gr", &["--n", "10", "--m", "30"]);
    assert_eq!(mindist(&["radius", "--delta", "1.5", &g]).status.code(), Some(1));
    assert_eq!(mindist(&["diam", "--levels", "0", &g]).status.code(), Some(1));
}

#[test]
fn oracle_guard_refuses_large_graphs() {
    let dir = tempfile::tempdir().unwrap();
    let g = gen(dir.path(), "big.gr", &["--n", "5001", "--m", "5001"]);
    let out = mindist(&["exact", &g]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("5000"));
}

#[test]
fn bound_violation_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let (graph, seed) = (0..200)
        .map(|s| (planted_center(s, 30, 1), s))
        .find(|(g, s)| {
            let alg = Algorithm::Ecc {
                delta: 0.5,
                mode: Mode::Unweighted,
            };
            !compare(g, alg, *s, false, &Counters::new()).unwrap().pass
        })
        .expect("a planted instance outside the guarantee regime");
    let path = dir.path().join("planted.gr");
    dimacs::save_graph(&graph, &path).unwrap();
    let path = path.to_string_lossy().into_owned();
    let seed = seed.to_string();
    let out = mindist(&["ecc", "--unweighted", "--compare", "--seed", &seed, &path]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["result"]["comparison"]["pass"], false);
}

#[test]
fn bench_rows_are_reproducible() {
    let run = || json(&mindist(&["bench", "--sizes", "16,32", "--seed", "5"]));
    let (a, b) = (run(), run());
    let counters = |v: &Value| {
        v["result"]
            .as_array()
            .unwrap()
            .iter()
            .map(|r| (r["relaxations_approx"].clone(), r["relaxations_oracle"].clone()))
            .collect::<Vec<_>>()
    };
    assert_eq!(counters(&a), counters(&b));
    assert_eq!(a["result"].as_array().unwrap().len(), 4);
}

#[test]
fn worker_count_does_not_change_results() {
    let dir = tempfile::tempdir().unwrap();
    let g = gen(dir.path(), "g.gr", &["--n", "120", "--m", "600", "--max-weight", "6"]);
    let with = |threads: &str, cmd: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_mindist"))
            .env("MINDIST_THREADS", threads)
            .args([cmd, "--seed", "8", &g])
            .output()
            .unwrap();
        let mut v = json(&out);
        v.as_object_mut().unwrap().remove("wall_time_ms");
        v
    };
    for cmd in ["diam", "radius", "ecc"] {
        assert_eq!(with("1", cmd), with("4", cmd), "{cmd}");
        assert_eq!(with("0", cmd), with("4", cmd), "{cmd}");
    }
}
