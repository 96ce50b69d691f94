use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn ncgeom(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ncgeom")).args(args).output().expect("spawn ncgeom")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn required_all_pass(scenario: &Value) -> bool {
    scenario["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true || c["required"] == false)
}

fn check<'a>(scenario: &'a Value, id: &str) -> &'a Value {
    scenario["checks"].as_array().unwrap().iter().find(|c| c["id"] == id).unwrap_or_else(|| panic!("missing {id}"))
}

#[test]
fn all_json_matches_golden() {
    let out = ncgeom(&["all", "--format", "json"]);
    let golden = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/all.json")).unwrap();
    assert_eq!(String::from_utf8(out.stdout.clone()).unwrap(), golden);

    let doc = json(&out);
    assert_eq!(doc["schema"], 1);
    let names: Vec<&str> = doc["scenarios"].as_array().unwrap().iter().map(|s| s["scenario"].as_str().unwrap()).collect();
    assert_eq!(names, ["connes-lott", "matrix-geometry", "projective"]);
    let passed = doc["scenarios"].as_array().unwrap().iter().all(required_all_pass);
    assert_eq!(out.status.code(), Some(if passed { 0 } else { 1 }));
}

#[test]
fn projective_exits_zero() {
    let out = ncgeom(&["projective"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().contains("8/8 required checks passed"));
}

#[test]
fn connes_lott_two_mu_sections() {
    let out = ncgeom(&["connes-lott", "--mu", "0", "--mu", "1", "--format", "json"]);
    let doc = json(&out);
    for mu in ["0", "1"] {
        assert_eq!(check(&doc, &format!("nabla_square.table.mu={mu}"))["passed"], true);
    }
    assert!(doc["checks"].as_array().unwrap().iter().all(|c| !c["id"].as_str().unwrap().ends_with("mu=2")));
    let table = doc["tables"].as_array().unwrap().iter().find(|t| t["title"] == "∇² on the η basis").unwrap();
    let rows: Vec<Vec<&str>> =
        table["rows"].as_array().unwrap().iter().map(|r| r.as_array().unwrap().iter().map(|x| x.as_str().unwrap()).collect()).collect();
    assert_eq!(rows[0][..5], ["0", "0", "0", "(-1) e⊗ξ", "(-1) e⊗ξ"]);
    assert_eq!(rows[1][..5], ["1", "0", "0", "(-2) e⊗ξ", "(-1) e⊗ξ"]);
}

#[test]
fn seeded_matrix_run_is_reproducible() {
    let a = ncgeom(&["matrix-geometry", "--n", "2", "--seed", "7", "--format", "json"]);
    let b = ncgeom(&["matrix-geometry", "--n", "2", "--seed", "7", "--format", "json"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.status.code(), b.status.code());
    let doc = json(&a);
    assert_eq!(doc["inputs"]["seed"], "7");
    check(&doc, "curvature.traceless_invariance");
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.txt");
    let out = ncgeom(&["projective", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    assert!(std::fs::read_to_string(&path).unwrap().contains("lift.square"));
}

#[test]
fn gamma_file_matches_preset() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("zero.json");
    let zeros = vec![vec![vec!["0"; 3]; 3]; 3];
    std::fs::write(&path, serde_json::to_string(&zeros).unwrap()).unwrap();
    let from_file = json(&ncgeom(&["matrix-geometry", "--gamma-file", path.to_str().unwrap(), "--trials", "2", "--format", "json"]));
    let preset = json(&ncgeom(&["matrix-geometry", "--gamma-file", "zero", "--trials", "2", "--format", "json"]));
    assert_eq!(check(&from_file, "riemann.closed_form"), check(&preset, "riemann.closed_form"));
    assert_eq!(check(&from_file, "curvature.junk_zero")["passed"], true);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["connes-lott", "--mu", "zz"][..],
        &["connes-lott", "--bogus"],
        &["matrix-geometry", "--n", "5"],
        &["matrix-geometry", "--gamma-file", "/nonexistent/gamma.json"],
    ] {
        let out = ncgeom(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}
