use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_schoenberg-lab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_spec(dir: &Path, name: &str, body: &str) -> Output {
    let path = dir.join(format!("{name}.spec.json"));
    fs::write(&path, body).unwrap();
    lab(&["run", path.to_str().unwrap()])
}

fn read_json(path: impl AsRef<Path>) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn syntax_error_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_spec(dir.path(), "bad", r#"{"name": "bad", "command": "bounds""#);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line"));
}

#[test]
fn unknown_field_and_symbol_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_spec(
        dir.path(),
        "typo",
        r#"{"name": "t", "command": "layers", "points": {"kind": "line", "count": 4}, "centre": 0}"#,
    );
    assert_eq!(out.status.code(), Some(2));
    let out = run_spec(
        dir.path(),
        "sym",
        r#"{"name": "s", "command": "toeplitz", "symbol": {"name": "cauchy"}}"#,
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cauchy"));
}

#[test]
fn missing_spec_file_exits_2() {
    assert_eq!(lab(&["run", "/definitely/not/here.json"]).status.code(), Some(2));
}

#[test]
fn bounds_for_exponential_on_integers() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_spec(
        dir.path(),
        "b",
        r#"{"name": "exp", "command": "bounds",
            "symbol": {"name": "exponential", "a": 1.0},
            "points": {"kind": "line", "count": 512}}"#,
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = read_json(dir.path().join("exp.json"));
    assert_eq!(v["schema"], 1);
    assert_eq!(v["command"], "bounds");
    let lmax = v["report"]["lambda_max"].as_f64().unwrap();
    let coth = (1.0f64 / 2.0).tanh().recip();
    assert!(lmax < coth && coth - lmax < 1e-3);
    assert!((v["schur"]["bound"].as_f64().unwrap() - 6.0).abs() < 1e-8);
    assert_eq!(v["invertibility"]["satisfied"], false);
}

#[test]
fn divergent_schur_bound_exits_3_after_writing() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_spec(
        dir.path(),
        "h",
        r#"{"name": "hilbert", "command": "bounds",
            "symbol": {"name": "inverse_power", "beta": 1.0},
            "points": {"kind": "line", "count": 64}}"#,
    );
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not integrable"));
    let v = read_json(dir.path().join("hilbert.json"));
    assert_eq!(v["schur"]["bound"], "inf");
}

#[test]
fn toeplitz_csv_and_interval() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_spec(
        dir.path(),
        "t",
        r#"{"name": "toe", "command": "toeplitz",
            "symbol": {"name": "gaussian", "a": 1.0},
            "phi_points": 11, "sizes": [16, 64]}"#,
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(dir.path().join("toe.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("phi,value,error_bar"));
    let first: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(first[0], "0.0000000000000000e0");
    assert_eq!(csv.lines().count(), 12);
    let v = read_json(dir.path().join("toe.json"));
    assert_eq!(v["method"], "theta_mixture");
    for s in v["finite_sections"].as_array().unwrap() {
        assert_eq!(s["contained"], true);
    }
}

#[test]
fn gram_verify_random_pairs() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_spec(
        dir.path(),
        "g",
        r#"{"name": "gram", "command": "gram-verify",
            "family": {"base": "gaussian", "a": 0.7, "n": 2},
            "cases": 12, "seed": 5}"#,
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = read_json(dir.path().join("gram.json"));
    assert_eq!(v["passed"], true);
    assert_eq!(v["seed"], 5);
    assert_eq!(v["cases"], 12);
    let csv = fs::read_to_string(dir.path().join("gram.csv")).unwrap();
    assert_eq!(csv.lines().count(), 13);
}

#[test]
fn matern_family_at_critical_exponent_is_a_spec_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_spec(
        dir.path(),
        "m",
        r#"{"name": "m", "command": "gram-verify",
            "family": {"base": "matern", "a": 1.0, "mu": 0.5, "n": 2}}"#,
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn moments_for_single_atom() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_spec(
        dir.path(),
        "mo",
        r#"{"name": "mo", "command": "moments",
            "moments": [{"alpha": 2.0, "d": 1, "measure": {"atoms": [[1.0, 1.0]]}}]}"#,
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = read_json(dir.path().join("mo.json"));
    assert_eq!(v["checks"][0]["consistent"], true);
}

#[test]
fn layers_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_spec(
        dir.path(),
        "l",
        r#"{"name": "lay", "command": "layers",
            "points": {"kind": "lattice", "n": 2, "lo": -10, "hi": 10},
            "center": 220, "max_layer": 6}"#,
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = read_json(dir.path().join("lay.json"));
    assert_eq!(v["violations"].as_array().unwrap().len(), 0);
    assert_eq!(v["counts"][0], 1);
    let csv = fs::read_to_string(dir.path().join("lay.csv")).unwrap();
    assert!(csv.starts_with("m,count,bound,crude_bound\n"));
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let body = r#"{"name": "sweep", "command": "spectrum-sweep",
        "symbol": {"name": "matern", "p": 1.5, "a": 1.0},
        "points": {"kind": "jittered", "n": 2, "count": 120, "d_target": 1.0, "seed": 9},
        "sizes": [30, 60, 120], "seed": 9}"#;
    assert!(run_spec(dir.path(), "s", body).status.success());
    let csv1 = fs::read(dir.path().join("sweep.csv")).unwrap();
    let json1 = fs::read(dir.path().join("sweep.json")).unwrap();
    assert!(run_spec(dir.path(), "s", body).status.success());
    assert_eq!(csv1, fs::read(dir.path().join("sweep.csv")).unwrap());
    assert_eq!(json1, fs::read(dir.path().join("sweep.json")).unwrap());
}

#[test]
fn list_symbols_prints_catalog() {
    let out = lab(&["list-symbols"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    for name in ["gaussian", "exponential", "matern", "inverse_power", "truncated_power"] {
        assert!(text.contains(name));
    }
}
