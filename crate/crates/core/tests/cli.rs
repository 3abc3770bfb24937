use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_smallq")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid json")
}

#[test]
fn decompose_unit_and_pair() {
    let v = json(&["decompose", "L0"]);
    assert_eq!(v["summands"][0]["label"], "L(0)");
    let v = json(&["decompose", "L1", "L1"]);
    let labels: Vec<&str> = v["summands"].as_array().unwrap().iter().map(|s| s["label"].as_str().unwrap()).collect();
    assert_eq!(labels, ["L(0)", "L(2)"]);
}

#[test]
fn decompose_example_word() {
    let v = json(&["decompose", "--l", "5", "L2", "L2", "L3", "L3"]);
    assert_eq!(v["dim"], 144);
    let has_top_zero = v["summands"].as_array().unwrap().iter().any(|s| s["projective"] == true && s["dim"] == 10 && s["head_weight"] == 0);
    assert!(has_top_zero);
}

#[test]
fn tor_of_l8() {
    let v = json(&["tor", "--l", "5", "B", "L8"]);
    assert_eq!(v["degrees"]["0"], 1);
    assert_eq!(v["degrees"]["1"], 0);
    assert!(v["stabilized_at"].as_u64().unwrap() >= 1);
    let w = json(&["tor", "B", "L8", "--method", "two-sided", "--window=-1..1"]);
    assert_eq!(w["degrees"].as_object().unwrap().len(), 3);
}

#[test]
fn blocks_strict() {
    let v = json(&["blocks", "--l", "5", "2", "2", "3", "3"]);
    assert_eq!(v["block"], 1);
    assert!(v["tor0"].as_u64().unwrap() > 1);
    assert_eq!(v["strict"], true);
}

#[test]
fn confspace_loop() {
    let v = json(&["confspace", "--l", "5", "--colors", "-2,-2", "loop", "0", "1"]);
    // ζ^{-4} = ζ at l = 5
    assert_eq!(v["zeta_exponent"], "1");
    let t = json(&["confspace", "--colors", "-2,-2,3", "--approx"]);
    assert_eq!(t.as_array().unwrap().len(), 10);
    assert!(t[0]["scalar"]["approx"].is_object());
}

#[test]
fn output_is_deterministic() {
    let a = run(&["monodromy", "1", "1", "1", "1"]);
    let b = run(&["monodromy", "1", "1", "1", "1"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn table_mode() {
    let out = run(&["decompose", "L1", "L1", "--table"]);
    let s = String::from_utf8(out.stdout).unwrap();
    assert!(s.starts_with("dim 4\n"));
    assert!(s.contains("L(2)"));
}

#[test]
fn usage_errors() {
    for args in [
        &["decompose", "X3"][..],
        &["blocks", "4", "5"],
        &["tor", "B", "L8", "--window", "3..1"],
        &["tor", "B", "L8", "--cap", "0"],
        &["--order", "7", "decompose", "L0"],
        &["confspace", "--colors", "1,2", "half", "0", "1"],
        &["nonsense"],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?} printed partial output");
    }
}

#[test]
fn verify_paper_detects_tampering() {
    let out = run(&["verify-paper", "--negate-braiding", "--table"]);
    assert_eq!(out.status.code(), Some(1));
    let s = String::from_utf8(out.stdout).unwrap();
    assert!(s.lines().any(|l| l.starts_with("FAIL braiding")));
}

#[test]
fn verify_paper_even_l() {
    let v = json(&["--l", "6", "verify-paper"]);
    assert_eq!(v["failed"], 0);
    let names: Vec<&str> = v["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    assert_eq!(names, ["steinberg", "alcove", "admissible"]);
}
