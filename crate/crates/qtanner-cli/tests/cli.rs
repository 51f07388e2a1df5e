use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn qtanner(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qtanner")).args(args).current_dir(cwd).output().expect("binary runs")
}

fn ok(args: &[&str], cwd: &Path) -> String {
    let out = qtanner(args, cwd);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn ok_json(args: &[&str], cwd: &Path) -> Value {
    serde_json::from_str(&ok(args, cwd)).expect("stdout is JSON")
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn code_of(args: &[&str], cwd: &Path) -> (i32, String) {
    let out = qtanner(args, cwd);
    (out.status.code().unwrap(), String::from_utf8_lossy(&out.stderr).into_owned())
}

#[test]
fn expander_graph_round_trips_through_spectrum_and_neighbor() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert!(ok(&["expander", "build", "--p", "3", "--m", "1", "--degree", "6", "--out", "g.json"], d).is_empty());
    let graph = read_json(&d.join("g.json"));
    assert_eq!(graph["generators"].as_array().unwrap().len(), 6);
    let spec = ok_json(&["expander", "spectrum", "--graph", "g.json"], d);
    assert_eq!(spec["vertices"], 27);
    assert!(spec["lambda"].as_f64().unwrap() < 6.0);
    let nb = ok_json(&["expander", "neighbor", "--graph", "g.json", "--vertex", "0", "--gen", "0"], d);
    assert_ne!(nb["neighbor"], "0");
}

#[test]
fn cycle_spectrum_reports_signed_second_eigenvalue() {
    let dir = tempfile::tempdir().unwrap();
    let spec = ok_json(&["expander", "spectrum", "--cycle", "9"], dir.path());
    let expect = 2.0 * (2.0 * std::f64::consts::PI / 9.0).cos();
    assert!((spec["second_eigenvalue"].as_f64().unwrap() - expect).abs() < 1e-9);
}

#[test]
fn strict_generators_fail_below_three_inverse_pairs() {
    let dir = tempfile::tempdir().unwrap();
    let (code, err) = code_of(&["expander", "build", "--p", "3", "--degree", "4"], dir.path());
    assert_eq!(code, 2);
    assert!(err.contains("degree >= 6"), "{err}");
}

#[test]
fn inner_code_verify_chain_plants_the_ones_vector() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(&["inner", "search", "--p", "2", "--delta", "5", "--ka", "2", "--kb", "2", "--out", "inner.json"], d);
    let pair = read_json(&d.join("inner.json"));
    assert_eq!(pair["delta"], 5);
    assert_eq!(pair["provenance"]["rho_target"], "1/8");
    let summary = ok_json(&["code", "build", "--inner", "inner.json", "--out", "code.json", "--alist", "."], d);
    assert_eq!(summary["n"], 675);
    assert_eq!(summary["orthogonal"], true);
    assert!(d.join("hx.alist").exists() && d.join("hz.alist").exists());
    let flags = ok_json(&["code", "verify", "--code", "code.json"], d);
    for key in ["one_in_cx", "one_in_cz", "one_not_in_cz_perp", "one_not_in_cx_perp", "row_sums_zero"] {
        assert_eq!(flags[key], true, "{key}");
    }
    let dim = ok_json(&["code", "dimension", "--code", "code.json"], d);
    assert!(dim["k"].as_u64().unwrap() >= 1);
    let (code, err) = code_of(&["code", "build", "--inner", "inner.json", "--delta", "4"], d);
    assert_eq!(code, 2, "{err}");
}

#[test]
fn coprimality_is_checked_before_building() {
    let dir = tempfile::tempdir().unwrap();
    let (code, err) = code_of(&["pipeline", "--p", "3", "--delta", "3", "--out", "out"], dir.path());
    assert_eq!(code, 2);
    assert!(err.contains("gcd(243, 3) = 3"), "{err}");
    assert!(!dir.path().join("out").exists());
}

#[test]
fn exhausted_budget_exits_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(&["csp", "emit", "--code", "steane", "--out", "st.json"], d);
    let (code, err) = code_of(&["csp", "maxsat", "--instance", "st.json", "--budget", "4"], d);
    assert_eq!(code, 3);
    assert!(err.contains("budget"), "{err}");
}

#[test]
fn steane_csp_is_certified_and_reduced() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(&["csp", "emit", "--code", "steane", "--beta", "one", "--out", "st.json"], d);
    assert_eq!(read_json(&d.join("st.json"))["p"], 2);
    let cert = ok_json(&["csp", "unsat", "--instance", "st.json"], d);
    assert_eq!(cert["inconsistent"], true);
    let sat = ok_json(&["csp", "maxsat", "--instance", "st.json", "--mode", "exact"], d);
    assert!(sat["satisfied"].as_u64().unwrap() < sat["total"].as_u64().unwrap());
    let text = ok(&["csp", "reduce3", "--instance", "st.json"], d);
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("p xor "));
    for line in lines.filter(|l| !l.starts_with('c')) {
        let fields: Vec<&str> = line.split_whitespace().collect();
        assert_eq!(fields[0], "x");
        assert!(fields.len() - 2 <= 3, "{line}");
    }
    let (code, _) = code_of(&["csp", "emit", "--code", "steane", "--beta", "1,0,0,0,0,0,0"], d);
    assert_eq!(code, 2);
    let sos = ok_json(&["csp", "sos-bound", "--c1", "0.5", "--c2", "0.25", "--m", "100", "--ell", "4"], d);
    assert_eq!(sos["sos_level_bound"].as_f64().unwrap(), 0.5 * 0.25 * 100.0 / 16.0);
}

#[test]
fn steane_clusters_and_spread() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let rep = ok_json(&["nlts", "clusters", "--code", "steane", "--eps", "0.1", "--c2", "0.4"], d);
    assert_eq!(rep["all_passed"], true);
    assert_eq!(rep["clusters"], 2);
    let spread = ok_json(&["nlts", "spread", "--code", "steane", "--eps", "0.1", "--trials", "10"], d);
    assert_eq!(spread["dichotomy_held"], 10);
    let bound = ok_json(&["nlts", "depth-bound", "--n", "1e9", "--mu", "0.0732", "--delta", "0.1"], d);
    let depth = bound["depth_lower_bound"].as_f64().unwrap();
    assert!((depth - (0.01 * 1e9 / (400.0 * (1.0f64 / 0.0732).ln())).ln() / 3.0).abs() < 1e-12);
    let (code, _) = code_of(&["nlts", "depth-bound", "--n", "10", "--mu", "2", "--delta", "0.1"], d);
    assert_eq!(code, 2);
}

#[test]
fn pipeline_overrides_config_and_reports() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fs::write(d.join("cfg.json"), r#"{"seed": 3, "stages": ["expander", "inner"], "budgets": {"ssexp_trials": 10}}"#).unwrap();
    let man = ok_json(&["pipeline", "--config", "cfg.json", "--stages", "expander,inner,code,verify,csp", "--out", "run"], d);
    assert_eq!(man["config"]["seed"], 3);
    assert_eq!(man["verify"]["all_flags"], true);
    assert_eq!(man["csp"]["inconsistent"], true);
    let text = ok(&["report", "--dir", "run"], d);
    assert!(text.contains("dimension: skipped"));
    assert!(text.contains("ssexp: skipped"));
    fs::write(d.join("bad.json"), r#"{"colour": "blue"}"#).unwrap();
    let (code, err) = code_of(&["pipeline", "--config", "bad.json"], d);
    assert_eq!(code, 2);
    assert!(err.contains("colour"), "{err}");
    let (code, _) = code_of(&["pipeline", "--stages", "code"], d);
    assert_eq!(code, 2);
    let (code, _) = code_of(&["report", "--dir", "missing"], d);
    assert_eq!(code, 2);
}

#[test]
fn pipeline_reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let args = |out: &'static str| ["pipeline", "--stages", "expander,inner,code,verify,csp", "--seed", "11", "--out", out];
    ok(&args("a"), d);
    ok(&args("b"), d);
    for name in ["expander.json", "inner.json", "code.json", "hx.alist", "planted.json", "csp_instance.json", "csp_3xor.txt"] {
        assert_eq!(fs::read(d.join("a").join(name)).unwrap(), fs::read(d.join("b").join(name)).unwrap(), "{name}");
    }
}
