//! End-to-end tests of the `pbdiag` binary: exit codes, output formats,
//! and byte-level determinism.

use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn pbdiag(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pbdiag"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary runs")
}

fn write(dir: &TempDir, name: &str, content: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, content).unwrap();
    path.to_string_lossy().into_owned()
}

const UNSAT_MODEL: &str = r#"{
  "variables": ["x1", "x2"],
  "constraints": [
    {"name": "need_both_plus", "terms": [[1, "x1"], [1, "x2"]], "sense": ">=", "rhs": 3}
  ]
}"#;

const CONTRADICTION: &str = r#"{
  "variables": ["x1"],
  "constraints": [
    {"name": "A", "terms": [[1, "x1"]], "sense": ">=", "rhs": 1},
    {"name": "B", "terms": [[1, "x1"]], "sense": "<=", "rhs": 0}
  ]
}"#;

const SAT_MODEL: &str = r#"{
  "variables": ["x1"],
  "constraints": [
    {"name": "one", "terms": [[1, "x1"]], "sense": ">=", "rhs": 1}
  ]
}"#;

#[test]
fn check_reports_unsat_with_exit_one() {
    let dir = TempDir::new().unwrap();
    let model = write(&dir, "m.json", UNSAT_MODEL);
    let out = pbdiag(&["check", &model], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "UNSAT");
}

#[test]
fn check_reports_sat_with_exit_zero() {
    let dir = TempDir::new().unwrap();
    let model = write(&dir, "m.json", SAT_MODEL);
    let out = pbdiag(&["check", &model], dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "SAT");
}

#[test]
fn check_accepts_opb_input() {
    let dir = TempDir::new().unwrap();
    let model = write(&dir, "m.opb", "* #variable= 2 #constraint= 1\n+1 x1 +1 x2 >= 3 ;\n");
    let out = pbdiag(&["check", &model], dir.path());
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn parse_errors_exit_two() {
    let dir = TempDir::new().unwrap();
    let model = write(&dir, "broken.json", "{ not json");
    let out = pbdiag(&["check", &model], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
    // missing file
    let out = pbdiag(&["check", "no-such-file.json"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    // usage error
    let out = pbdiag(&["check"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn core_prints_reduction_json() {
    let dir = TempDir::new().unwrap();
    let model = write(&dir, "m.json", CONTRADICTION);
    let out = pbdiag(&["core", &model], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["names"], serde_json::json!(["A", "B"]));
    assert_eq!(doc["original"], 2);
    assert_eq!(doc["core"], 2);
    assert!(doc["reduction_pct"].is_number());
}

#[test]
fn core_on_feasible_model_fails() {
    let dir = TempDir::new().unwrap();
    let model = write(&dir, "m.json", SAT_MODEL);
    let out = pbdiag(&["core", &model], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("feasible"));
}

#[test]
fn iis_pipeline_verifies_the_contradiction() {
    let dir = TempDir::new().unwrap();
    let model = write(&dir, "m.json", CONTRADICTION);
    let out = pbdiag(&["iis", &model, "--method", "csea+qx"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["method"], "csea+qx");
    assert_eq!(doc["iis"], serde_json::json!(["A", "B"]));
    assert_eq!(doc["verified"], true);
}

#[test]
fn iis_supports_every_minimizer() {
    let dir = TempDir::new().unwrap();
    let model = write(&dir, "m.json", CONTRADICTION);
    for method in ["qx", "deletion", "additive", "csea+qx"] {
        let out = pbdiag(&["iis", &model, "--method", method], dir.path());
        assert_eq!(out.status.code(), Some(0), "method {method}");
        let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        assert_eq!(doc["iis"], serde_json::json!(["A", "B"]), "method {method}");
        assert_eq!(doc["verified"], true);
    }
}

#[test]
fn iis_on_feasible_model_fails() {
    let dir = TempDir::new().unwrap();
    let model = write(&dir, "m.json", SAT_MODEL);
    let out = pbdiag(&["iis", &model, "--method", "qx"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("feasible"));
}

#[test]
fn gen_writes_a_loadable_model() {
    let dir = TempDir::new().unwrap();
    let out_path = dir.path().join("gen.json");
    let out = pbdiag(
        &[
            "gen", "--agents", "2", "--days", "2", "--shifts", "1", "--demand", "1",
            "--inject", "dayoff", "--seed", "5", "--out",
            out_path.to_str().unwrap(),
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&out_path).unwrap();
    let model = pbdiag::io::load_model(&text).unwrap();
    assert_eq!(model.num_vars(), 4);
    // the injected instance is infeasible
    let check = pbdiag(&["check", out_path.to_str().unwrap()], dir.path());
    assert_eq!(check.status.code(), Some(1));
}

#[test]
fn bench_emits_one_row_per_cell() {
    let dir = TempDir::new().unwrap();
    let manifest: Vec<serde_json::Value> = (0..10)
        .map(|seed| {
            serde_json::json!({
                "agents": 2, "days": 2, "shifts_per_day": 1,
                "demand_per_shift": 1, "injection": "dayoff_vs_demand",
                "seed": seed
            })
        })
        .collect();
    let manifest_path = write(&dir, "suite.json", &serde_json::to_string(&manifest).unwrap());
    let out = pbdiag(
        &[
            "bench", "--manifest", &manifest_path, "--methods", "csea,csea+qx,deletion",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let csv = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert!(lines[0].starts_with("instance,method,cons,vars"));
    let data_rows = lines
        .iter()
        .filter(|l| l.starts_with("inst0"))
        .count();
    assert_eq!(data_rows, 10 * 3);
    let summary_rows = lines.iter().filter(|l| l.starts_with("summary,")).count();
    assert_eq!(summary_rows, 3);
}

#[test]
fn export_dot_writes_a_digraph() {
    let dir = TempDir::new().unwrap();
    let model = write(&dir, "m.json", CONTRADICTION);
    let dot_path = dir.path().join("g.dot");
    let out = pbdiag(
        &["export-dot", &model, "--out", dot_path.to_str().unwrap()],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let dot = std::fs::read_to_string(&dot_path).unwrap();
    assert!(dot.starts_with("digraph conflict {"));
    assert!(dot.contains("conflict"));
}

#[test]
fn trace_flag_writes_a_replayable_log() {
    let dir = TempDir::new().unwrap();
    let model = write(&dir, "m.json", CONTRADICTION);
    let trace_path = dir.path().join("run.trace");
    let out = pbdiag(
        &["check", &model, "--trace", trace_path.to_str().unwrap()],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(1));
    let trace = std::fs::read_to_string(&trace_path).unwrap();
    assert!(trace.lines().any(|l| l.starts_with("conflict ")));
    assert!(trace.lines().last().unwrap().starts_with("result UNSAT"));
}

#[test]
fn timeout_exits_three() {
    let dir = TempDir::new().unwrap();
    // large enough that a zero-millisecond budget trips immediately
    let gen = pbdiag(
        &[
            "gen", "--agents", "6", "--days", "8", "--demand", "3", "--window", "4,3",
            "--seed", "1", "--out", "big.json",
        ],
        dir.path(),
    );
    assert_eq!(gen.status.code(), Some(0));
    let out = pbdiag(&["check", "big.json", "--time-limit-ms", "0"], dir.path());
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "TIMEOUT");
}
