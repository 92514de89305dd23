use std::process::Command;

use serde_json::{json, Value};
use sympcap::cli::run_with;

const BASE_C: &str = "{[0,1,-1],[0,1,1],[1,0,1],[0,2,0],[2,0,0],[1,1,0],[0,0,2]}";
const BASE_PSI: &str = "a2: 1; 2*e3: 5";

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("sympcap").chain(args.iter().copied());
    let code = run_with(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn run_json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let (code, out, err) = run(&full);
    let v = serde_json::from_str(&out).unwrap_or_else(|e| panic!("not JSON ({e}): {out:?} / {err:?}"));
    (code, v)
}

fn triple(beta: &str) -> Vec<&str> {
    vec![
        "exchange",
        "triple",
        "--rank",
        "3",
        "--c",
        BASE_C,
        "--psi",
        BASE_PSI,
        "--alpha=-a1",
        "--gamma",
        "a1+a2",
        "--beta",
        beta,
    ]
}

#[test]
fn orbit_dimension_of_siegel_orbit() {
    let (code, out, _) = run(&["orbit", "dim", "--partition", "2,2,2"]);
    assert_eq!((code, out.trim()), (0, "12"));
    let (code, out, _) = run(&["orbit", "dim", "--transpose", "--partition", "2^3"]);
    assert_eq!((code, out.trim()), (0, "12"));
}

#[test]
fn json_documents_carry_the_schema() {
    let (code, v) = run_json(&["orbit", "dim", "--partition", "2,2,2"]);
    assert_eq!(code, 0);
    assert_eq!(v["schema"], "sympcap/1");
    assert_eq!(v["dimension"], 12);
}

#[test]
fn whole_corpus_replays() {
    let (code, out, _) = run(&["exchange", "corpus", "--run-all"]);
    assert_eq!(code, 0);
    assert!(out.contains("32 of 32 as expected"), "{out}");
}

#[test]
fn exit_codes_separate_verdicts_from_usage_errors() {
    assert_eq!(run(&triple("a2")).0, 0);
    let (code, out, _) = run(&triple("2*e3"));
    assert_eq!(code, 1, "{out}");
    assert!(out.starts_with("fail"));
    let (code, _, err) = run(&[
        "exchange",
        "triple",
        "--rank",
        "3",
        "--c",
        "{a9",
        "--psi",
        "a2: 1",
        "--alpha=-a1",
        "--gamma",
        "a1+a2",
        "--beta",
        "a2",
    ]);
    assert_eq!(code, 2);
    assert!(err.contains("error"));
    assert_eq!(run(&["orbit", "dim", "--partition", "3,2"]).0, 2);
    assert_eq!(run(&["orbit", "nonsense"]).0, 2);
    assert_eq!(run(&["--help"]).0, 0);
}

#[test]
fn theta_lift_appends_the_odd_quarter_exponents() {
    let params = r#"{"sign":"+","entries":[{"s":"1/2","u":"1"}]}"#;
    let (code, v) = run_json(&["lift", "theta", "--m", "1", "--n", "3", "--params", params]);
    assert_eq!(code, 0);
    let s: Vec<&str> = v["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["s"].as_str().unwrap())
        .collect();
    assert_eq!(s, ["1/2", "3/4", "1/4"]);
    assert_eq!(v["sign"], "+");
}

#[test]
fn theta_lift_output_feeds_back_as_input() {
    let params = json!({"sign": "-", "entries": [{"s": "1/3", "u": "e(1/4)"}]}).to_string();
    let (_, lifted) = run_json(&["lift", "theta", "--m", "1", "--n", "2", "--params", &params]);
    let mut doc = lifted.clone();
    doc.as_object_mut().unwrap().remove("schema");
    let (code, squared) = run_json(&["lift", "square", "--params", &doc.to_string()]);
    assert_eq!(code, 0);
    assert_eq!(squared["entries"][0]["s"], "2/3");
    assert_eq!(squared["entries"][0]["u"], "-1");
    assert_eq!(squared["entries"][1]["s"], "1/2");
}

#[test]
fn binary_matches_in_process_entry_point() {
    let out = Command::new(env!("CARGO_BIN_EXE_sympcap"))
        .args(["orbit", "dim", "--partition", "2,2,2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "12");
    let out = Command::new(env!("CARGO_BIN_EXE_sympcap"))
        .args(["orbit", "dim", "--partition", "2,1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
