use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn ubqp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ubqp")).args(args).output().expect("binary runs")
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn pipeline_on_the_lp3_example() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("lp3.json");
    std::fs::write(&inst, r#"{"n": 3, "Q": [["-10", "-20"], ["-10"]], "b": ["-2", "-2", "-26"], "domain": "integer"}"#)
        .unwrap();
    let lp = dir.path().join("lp.json");
    let sol = dir.path().join("sol.json");
    let orc = dir.path().join("oracle.json");
    let s = |p: &Path| p.to_str().unwrap().to_string();
    assert!(ubqp(&["reduce", &s(&inst), "--out", &s(&lp)]).status.success());
    let lpj = json(&lp);
    assert_eq!((lpj["rows"].as_u64(), lpj["cols"].as_u64()), (Some(7), Some(14)));
    assert!(ubqp(&["solve", &s(&lp), "--out", &s(&sol)]).status.success());
    let sj = json(&sol);
    assert_eq!(sj["status"], "optimal");
    assert_eq!(sj["objective"], "-110");
    assert!(ubqp(&["solve", &s(&lp), "--mode", "float", "--pivot", "bland", "--out", &s(&sol)]).status.success());
    assert!((json(&sol)["objective"].as_f64().unwrap() + 110.0).abs() < 1e-6);
    assert!(ubqp(&["oracle", &s(&inst), "--out", &s(&orc)]).status.success());
    let oj = json(&orc);
    assert_eq!(oj["min"], "-110");
    assert_eq!(oj["argmins"], serde_json::json!(["111"]));
}

#[test]
fn gen_is_seeded() {
    let a = ubqp(&["gen", "--n", "5", "--seed", "3", "--lo", "-5", "--hi", "5"]);
    let b = ubqp(&["gen", "--n", "5", "--seed", "3", "--lo", "-5", "--hi", "5"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["n"], 5);
}

#[test]
fn verify_writes_reports_and_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("rep");
    let o = ubqp(&["verify", "--n-min", "3", "--n-max", "4", "--count", "5", "--seed", "42", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(out.join("report.csv")).unwrap();
    assert_eq!(csv.lines().count(), 11);
    let rep = json(&out.join("report.json"));
    assert_eq!(rep["records"].as_array().unwrap().len(), 10);
}

#[test]
fn selftest_passes() {
    let o = ubqp(&["selftest"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8_lossy(&o.stdout);
    assert!(text.contains("T3 E3 = I6"));
    assert!(!text.contains("[FAIL]"));
}

#[test]
fn bad_input_exits_one() {
    assert_eq!(ubqp(&["gen", "--n", "2"]).status.code(), Some(1));
    assert_eq!(ubqp(&["oracle", "/nonexistent/file.json"]).status.code(), Some(1));
    assert_eq!(ubqp(&["verify", "--n-min", "5", "--n-max", "4"]).status.code(), Some(1));
    assert_eq!(ubqp(&["frobnicate"]).status.code(), Some(1));
}

#[test]
fn counterexample_exits_two_with_a_bundle() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("rep");
    let o = ubqp(&["verify", "--n", "7", "--count", "8", "--seed", "42", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2), "{}", String::from_utf8_lossy(&o.stderr));
    let bundle = json(&out.join("counterexamples").join("counterexample_n7_i0007.json"));
    assert_eq!(bundle["record"]["lp_objective"], "-757/3");
    assert_eq!(bundle["brute_force"]["min"], "-252");
    assert!(bundle["record"]["bundle"].is_string());
}
