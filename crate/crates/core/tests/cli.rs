mod common;

use std::process::{Command, Output};

use common::fixture;
use serde_json::Value;

fn exptype(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_exptype")).args(args).output().expect("binary runs")
}

fn run_on(sub: &str, file: &str, extra: &[&str]) -> Output {
    let path = fixture(file);
    let mut args = vec![sub, "--input", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    exptype(&args)
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn e1_report_exits_zero_and_matches_golden() {
    let out = run_on("report", "e1.json", &[]);
    assert_eq!(out.status.code(), Some(0));
    let golden = std::fs::read_to_string(fixture("e1.report.json")).unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap(), golden);
}

#[test]
fn malformed_json_exits_two_with_location() {
    let out = run_on("report", "malformed.json", &[]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("malformed.json:"), "{err}");
}

#[test]
fn zeta_degree_mismatch_exits_two() {
    for sub in ["validate", "report", "invariants"] {
        let out = run_on(sub, "bad_degree.json", &[]);
        assert_eq!(out.status.code(), Some(2), "{sub}");
        let err = String::from_utf8(out.stderr).unwrap();
        assert!(err.contains("deg zeta = 1 but m = 2"), "{err}");
        assert!(err.contains("branches[1]"), "{err}");
    }
}

#[test]
fn missing_input_exits_two() {
    let out = exptype(&["report", "--input", "/nonexistent/problem.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn report_is_deterministic_and_sorted() {
    let a = run_on("report", "multi.json", &[]);
    let b = run_on("report", "multi.json", &[]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let doc = json(&a);
    let keys: Vec<(String, i64)> = doc["points"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| (p["c"].as_str().unwrap().to_string(), p["k"].as_i64().unwrap()))
        .collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    let regular = doc["points"].as_array().unwrap().iter().find(|p| p["c"] == "c'").unwrap();
    assert_eq!(regular["irregularity"], "0");
    assert_eq!(regular["regular"], true);
}

#[test]
fn invariants_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("poly-{c}-{k}.svg");
    let out = run_on("invariants", "e1.json", &["--svg", svg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v[0]["slopes"], serde_json::json!(["1", "3/2"]));
    assert_eq!(v[0]["irregularity"], "5");
    assert_eq!(v[0]["vertices"], serde_json::json!([["0", "0"], ["2", "2"], ["4", "5"]]));
    let text = std::fs::read_to_string(dir.path().join("poly-0-0.svg")).unwrap();
    assert!(text.contains("vertices 0,0 2,2 4,5"));
    assert!(text.contains(">3/2<"));
}

#[test]
fn decompose_and_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let dest = dir.path().join("d.json");
    let out = run_on("decompose", "e1.json", &["--output", dest.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(dest).unwrap()).unwrap();
    let d = &v[0]["decomposition"];
    assert_eq!(d["p"], 2);
    assert_eq!(d["star"], true);
    let ranks: Vec<u64> = d["factors"].as_array().unwrap().iter().map(|f| f["rank_branchwise"].as_u64().unwrap()).collect();
    assert_eq!(ranks, vec![2, 1, 1]);
}

#[test]
fn verify_runs_the_oracle_even_when_disabled() {
    let out = run_on("verify", "multi.json", &["--oracle", "off"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    for p in v.as_array().unwrap() {
        assert_eq!(p["status"], "CONSISTENT");
        assert_eq!(p["oracle"]["outcome"], "checked");
    }
}

#[test]
fn oracle_off_omits_the_section() {
    let out = run_on("report", "e1.json", &["--oracle", "off"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(json(&out)["points"][0].get("oracle").is_none());
}

#[test]
fn max_order_flag_is_enforced() {
    let out = run_on("report", "multi.json", &["--max-order", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("exceeds"), "{err}");
}

#[test]
fn resolve_json_and_text() {
    let out = run_on("resolve", "alpha.json", &[]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["q"], 3);
    assert_eq!(v["steps"].as_array().unwrap().len(), 6);
    let out = run_on("resolve", "alpha.json", &["--text"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("blow-ups: 6"));
    assert!(text.contains("[E_d]"));
    assert!(text.contains("[P]"));
}

#[test]
fn resolve_rejects_holomorphic_alpha() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a.json");
    std::fs::write(&path, r#"{"alpha": {"terms": {"1": {"order": 1, "coeffs": {"0": "1"}}}}}"#).unwrap();
    let out = exptype(&["resolve", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn realize_then_report() {
    let out = run_on("realize", "spec.json", &[]);
    assert_eq!(out.status.code(), Some(0));
    let branches = json(&out);
    assert_eq!(branches.as_array().unwrap().len(), 1);
    assert_eq!(branches[0]["p"], 2);
    assert_eq!(branches[0]["q"], 3);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.json");
    let problem = serde_json::json!({"points": [{"c": "0", "k": 0, "branches": branches}]});
    std::fs::write(&path, problem.to_string()).unwrap();
    let out = exptype(&["report", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["points"][0]["irregularity"], "3");
}

#[test]
fn roundtrip_reports_match() {
    let out = run_on("roundtrip", "spec.json", &[]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["matches"], true);
    assert_eq!(v["computed"]["factors"].as_array().unwrap().len(), 2);
}

#[test]
fn conflicting_orbit_exits_two() {
    let out = run_on("realize", "spec_conflict.json", &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("one orbit"));
}

#[test]
fn stdin_input() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_exptype"))
        .arg("invariants")
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    use std::io::Write;
    let text = std::fs::read(fixture("e1.json")).unwrap();
    child.stdin.take().unwrap().write_all(&text).unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)[0]["irregularity"], "5");
}
