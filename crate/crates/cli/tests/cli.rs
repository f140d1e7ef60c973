//! End-to-end runs of the `opbar` binary against the shipped fixtures.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn opbar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_opbar")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

/// Runs with `--json` and returns the `degrees` table.
fn degrees(args: &[&str]) -> Vec<(i64, u64)> {
    let mut all = args.to_vec();
    all.push("--json");
    let o = opbar(&all);
    assert!(o.status.success(), "{args:?} failed: {}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).expect("report is JSON");
    v["degrees"].as_object().unwrap().iter().map(|(d, k)| (d.parse().unwrap(), k.as_u64().unwrap())).collect()
}

#[test]
fn exterior_bar_over_f2() {
    let e = fixture("exterior.json");
    let table = degrees(&["bar", "--field", "F2", "--input", &e, "--max-degree", "12"]);
    assert_eq!(table.len(), 13);
    for (d, k) in table {
        assert_eq!(k, u64::from(d % 2 == 0 && d >= 2), "degree {d}");
    }
}

#[test]
fn exterior_double_bar_over_f2() {
    let e = fixture("exterior.json");
    let table = degrees(&["bar", "--iterations", "2", "--input", &e, "--field", "F2", "--max-degree", "6"]);
    let ones: Vec<i64> = table.iter().filter(|(_, k)| *k == 1).map(|(d, _)| *d).collect();
    assert_eq!(ones, vec![3, 5, 6]);
    assert!(table.iter().all(|(_, k)| *k <= 1));
}

#[test]
fn nonassociative_input_is_rejected() {
    let o = opbar(&["bar", "--input", &fixture("nonassoc.json")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("algebra check failed: associativity at (x,x,y)"), "{}", stderr(&o));
}

#[test]
fn loop_space_of_the_two_sphere() {
    for model in ["s2.json", "s2_boundary.json"] {
        let table = degrees(&["cochains", "--input", &fixture(model), "--bar", "--field", "F2", "--max-degree", "8"]);
        assert_eq!(table, (1..=8).map(|d| (d, 1)).collect::<Vec<_>>(), "{model}");
    }
}

#[test]
fn interval_has_trivial_reduced_cohomology() {
    let o = opbar(&["cochains", "--input", &fixture("delta1.json"), "--json"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["degrees"].as_object().unwrap().values().all(|k| k == 0));
    assert!(v["algebra"].is_object());
}

#[test]
fn malformed_simplicial_inputs_exit_2_with_location() {
    let o = opbar(&["cochains", "--input", &fixture("malformed_face.json")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("face d0 of `e2`"), "{}", stderr(&o));
    let o = opbar(&["cochains", "--input", &fixture("bad_identity.json")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("on `012`"), "{}", stderr(&o));
}

#[test]
fn spec_verify_suites_pass() {
    for args in [
        &["verify", "--suite", "stasheff", "--arity", "6"][..],
        &["verify", "--suite", "bar-module", "--arity", "4", "--max-degree", "8"],
        &["verify", "--suite", "commutative-identity"],
    ] {
        let o = opbar(args);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stdout(&o));
        assert!(stdout(&o).lines().last().unwrap().ends_with("checks passed"));
        assert!(!stdout(&o).contains("FAIL"));
    }
}

#[test]
fn failing_identity_exits_1_and_is_named() {
    let o = opbar(&["verify", "--input", &fixture("nonassoc.json")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("associativity at (x,x,y)"), "{}", stderr(&o));
    let o = opbar(&["verify", "--input", &fixture("random_cdga_3.json")]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn reports_are_byte_identical_and_carry_bounds() {
    let dir = tempfile::tempdir().unwrap();
    let e = fixture("exterior.json");
    let run = |name: &str, threads: &str| {
        let out = dir.path().join(name);
        let o = Command::new(env!("CARGO_BIN_EXE_opbar"))
            .env("OPBAR_THREADS", threads)
            .args(["bar", "--input", &e, "--field", "F3", "--max-degree", "10", "--output"])
            .arg(&out)
            .output()
            .unwrap();
        assert!(o.status.success(), "{}", stderr(&o));
        std::fs::read(out).unwrap()
    };
    let first = run("a.json", "1");
    assert_eq!(first, run("b.json", "4"));
    let v: Value = serde_json::from_slice(&first).unwrap();
    let p = &v["provenance"];
    assert_eq!(p["field"], "F3");
    assert_eq!(p["max_degree"], 10);
    assert!(p["weight_bound"].as_u64().unwrap() > 0);
    let seeded = |seed: &str| stdout(&opbar(&["export", "random-dga", "--seed", seed]));
    assert_eq!(seeded("7"), seeded("7"));
    assert_ne!(seeded("7"), seeded("8"));
}

#[test]
fn bad_thread_count_and_field_exit_2() {
    let o = Command::new(env!("CARGO_BIN_EXE_opbar"))
        .env("OPBAR_THREADS", "0")
        .args(["verify", "--suite", "sym"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    let o = opbar(&["bar", "--input", &fixture("exterior.json"), "--field", "F6"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn operad_bar_module_homology() {
    let table = degrees(&["bar", "--operad", "Com", "--arity-bound", "3"]);
    let nonzero: Vec<_> = table.into_iter().filter(|(_, k)| *k > 0).collect();
    assert_eq!(nonzero, vec![(3, 1)]);
    let table = degrees(&["bar", "--operad", "K", "--arity-bound", "3"]);
    assert!(table.iter().all(|(_, k)| *k == 0));
}

#[test]
fn export_round_trips_through_bar() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x3.json");
    let o = opbar(&["export", "exterior-x3", "--field", "F5", "--output", out.to_str().unwrap()]);
    assert!(o.status.success());
    let table = degrees(&["bar", "--input", out.to_str().unwrap(), "--min-degree", "-12"]);
    for (d, k) in table {
        assert_eq!(k, u64::from(d % 2 == 0 && d <= -2), "degree {d}");
    }
}
