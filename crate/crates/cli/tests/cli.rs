//! End-to-end tests of the `threepoint` binary: output formats, exit
//! codes, and report files.

use std::process::{Command, Output};

fn threepoint(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_threepoint"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn reduce_prints_the_class() {
    let out = threepoint(&["reduce", "t^2", "t^-1*u"]);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(stdout(&out), "2*w1\n");
}

#[test]
fn reduce_exact_form_gives_zero() {
    let out = threepoint(&["reduce", "1", "t^-1*u"]);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(stdout(&out), "0\n");
}

#[test]
fn reduce_json_carries_coordinates() {
    let out = threepoint(&["reduce", "t^-1", "t", "--format", "json"]);
    assert_eq!(exit_code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("json");
    assert_eq!(v["c0"], "1");
    assert_eq!(v["c1"], "0");
    assert_eq!(v["class"], "w0");
}

#[test]
fn reduce_rejects_malformed_input() {
    let out = threepoint(&["reduce", "t^^", "u"]);
    assert_eq!(exit_code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
}

#[test]
fn mu_table_emits_full_grid() {
    let out = threepoint(&["mu-table", "3"]);
    assert_eq!(exit_code(&out), 0);
    let rows: Vec<serde_json::Value> = serde_json::from_str(&stdout(&out)).expect("json");
    assert_eq!(rows.len(), 49);
    let row = rows
        .iter()
        .find(|r| r["k"] == 1 && r["l"] == 0)
        .expect("row (1, 0)");
    assert_eq!(row["num"], "1");
    assert_eq!(row["den"], "1");
}

#[test]
fn verify_single_suite_json_passes() {
    let out = threepoint(&["verify", "--suite", "mu", "--format", "json"]);
    assert_eq!(exit_code(&out), 0);
    let records: Vec<serde_json::Value> = serde_json::from_str(&stdout(&out)).expect("json");
    assert_eq!(records.len(), 289);
    assert!(records.iter().all(|r| r["status"] == "pass"));
}

#[test]
fn verify_sequential_flag_matches() {
    let par = threepoint(&["verify", "--suite", "d3", "--format", "json"]);
    let seq = threepoint(&[
        "verify",
        "--suite",
        "d3",
        "--format",
        "json",
        "--sequential",
    ]);
    assert_eq!(exit_code(&par), 0);
    assert_eq!(exit_code(&seq), 0);
    assert_eq!(stdout(&par), stdout(&seq));
}

#[test]
fn verify_rejects_unknown_suite() {
    let out = threepoint(&["verify", "--suite", "bogus"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn verify_rejects_bad_ordering_tag() {
    let out = threepoint(&["verify", "--r", "2"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn verify_rejects_zero_level() {
    let out = threepoint(&["verify", "--kappa0", "0"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn verify_writes_report_file_and_summary() {
    let path = std::env::temp_dir().join(format!("threepoint-report-{}.json", std::process::id()));
    let out = threepoint(&[
        "verify",
        "--suite",
        "consistency",
        "--format",
        "json",
        "--out",
        path.to_str().expect("utf8 path"),
    ]);
    assert_eq!(exit_code(&out), 0);
    assert!(stdout(&out).contains("VERIFY: PASS"));
    let body = std::fs::read_to_string(&path).expect("report file");
    let records: Vec<serde_json::Value> = serde_json::from_str(&body).expect("json");
    assert_eq!(records.len(), 324);
    std::fs::remove_file(&path).ok();
}

#[test]
fn relation_expands_to_shifted_basis() {
    let out = threepoint(&["relation", "ddzw", "1", "-1"]);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(stdout(&out), "8*dbar@1 + 2*dbar@2\n");
}

#[test]
fn relation_carries_central_terms() {
    let out = threepoint(&["relation", "eezw", "1", "-2"]);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(stdout(&out), "3*dbar@-1 - 12*c1\n");
}

#[test]
fn relation_rejects_unknown_name() {
    let out = threepoint(&["relation", "nope", "0", "0"]);
    assert_eq!(exit_code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("known:"));
}

#[test]
fn char_prints_class_values() {
    let out = threepoint(&["char"]);
    assert_eq!(exit_code(&out), 0);
    assert!(stdout(&out).contains("classes: id = 2, order2 = 0, order3 = -1"));
}

#[test]
fn bracket_expands_derivation_action() {
    let out = threepoint(&["bracket", "d@0", "e@t^1"]);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(stdout(&out), "4*e@t^1 + e@t^2\n");
}

#[test]
fn bracket_central_pairing_uses_form_scale() {
    let a = threepoint(&["bracket", "e@t^1", "f@t^-1"]);
    assert_eq!(exit_code(&a), 0);
    let b = threepoint(&["bracket", "e@t^1", "f@t^-1", "--form-scale", "4"]);
    assert_eq!(exit_code(&b), 0);
    assert_ne!(stdout(&a), stdout(&b));
}
