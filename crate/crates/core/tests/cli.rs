use std::fs;
use std::path::Path;

use powerfact::cli::run_cli;
use serde_json::Value;

fn run(dir: &Path, args: &[&str]) -> i32 {
    let out = dir.to_str().unwrap();
    let mut full = vec!["powerfact"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--out", out]);
    run_cli(full)
}

fn read(dir: &Path, name: &str) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join(name)).unwrap()).unwrap()
}

#[test]
fn worked_example_passes_and_is_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    assert_eq!(run(a.path(), &["worked-example", "--default-envelope"]), 0);
    assert_eq!(run(b.path(), &["worked-example", "--default-envelope"]), 0);
    let ja = fs::read(a.path().join("worked-example.json")).unwrap();
    assert_eq!(ja, fs::read(b.path().join("worked-example.json")).unwrap());
    let doc = read(a.path(), "worked-example.json");
    assert_eq!(doc["mode"], "exact");
    assert_eq!(doc["config_digest"].as_str().unwrap().len(), 64);
    assert_eq!(doc["table"]["nu"], serde_json::json!([3, 9, 19, 33, 51, 73]));
    assert_eq!(doc["certificate"]["clauses"].as_array().unwrap().len(), 13);
    let csv = fs::read_to_string(a.path().join("worked-example.csv")).unwrap();
    assert_eq!(csv.lines().count(), 14);
}

#[test]
fn capped_factorize_records_exhaustion() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(dir.path(), &["factorize", "--cap", "1"]), 2);
    let doc = read(dir.path(), "factorize.json");
    let ex = &doc["certificate"]["exhausted"];
    assert_eq!(ex["cap"], 1);
    assert!(doc["result"].is_null());
}

#[test]
fn factorize_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(dir.path(), &["factorize"]), 0);
    let artifact = dir.path().join("factorize.json");
    assert_eq!(run(dir.path(), &["verify", artifact.to_str().unwrap()]), 0);
    assert_eq!(read(dir.path(), "verify.json")["matches_stored"], true);
}

#[test]
fn tampered_artifact_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(dir.path(), &["worked-example"]), 0);
    let path = dir.path().join("worked-example.json");
    let mut doc = read(dir.path(), "worked-example.json");
    doc["certificate"]["clauses"][0]["margin"] = "1/2".into();
    fs::write(&path, serde_json::to_string(&doc).unwrap()).unwrap();
    assert_eq!(run(dir.path(), &["verify", path.to_str().unwrap()]), 2);
}

#[test]
fn witnesses_report_delta_inverse() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(dir.path(), &["witnesses"]), 0);
    let doc = read(dir.path(), "witnesses.json");
    let inv = &doc["cones"]["delta"]["inverse"];
    assert_eq!(inv["beta"], "1");
    assert_eq!(inv["a"], serde_json::json!([[0, -1, 2]]));
    assert_eq!(doc["cones"]["delta"]["inverse_in_cone"], false);
}

#[test]
fn lift_passes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(dir.path(), &["lift"]), 0);
    let csv = fs::read_to_string(dir.path().join("lift.csv")).unwrap();
    assert_eq!(csv.lines().count(), 27);
}

#[test]
fn malformed_config_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    fs::write(&cfg, r#"{"schema": 1, "colour": "red"}"#).unwrap();
    assert_eq!(run(dir.path(), &["factorize", "--config", cfg.to_str().unwrap()]), 1);
    fs::write(&cfg, r#"{"schema": 2}"#).unwrap();
    assert_eq!(run(dir.path(), &["factorize", "--config", cfg.to_str().unwrap()]), 1);
    assert_eq!(run(dir.path(), &["factorize", "--r", "1/2"]), 1);
    assert_eq!(run(dir.path(), &["no-such-command"]), 1);
}

#[test]
fn config_file_selects_instances() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("matrix.json");
    fs::write(
        &cfg,
        r#"{"schema": 1, "instance": {"kind": "identity-matrix", "dim": 4}, "factorization": {"steps": 2}}"#,
    )
    .unwrap();
    assert_eq!(run(dir.path(), &["factorize", "--config", cfg.to_str().unwrap()]), 0);
    let doc = read(dir.path(), "factorize.json");
    assert_eq!(doc["result"]["closed_form"], true);

    let grid = dir.path().join("grid.json");
    fs::write(
        &grid,
        r#"{"schema": 1, "mode": "approx", "instance": {"kind": "grid", "half_width": 30.0, "step": 0.5, "net": "plateau"},
            "probe": {"kind": "envelope", "radii": [20, 5]}}"#,
    )
    .unwrap();
    assert_eq!(run(dir.path(), &["factorize", "--config", grid.to_str().unwrap()]), 0);
    assert_eq!(read(dir.path(), "factorize.json")["mode"], "approx");
    assert_eq!(run(dir.path(), &["worked-example", "--mode", "approx"]), 1);
}
