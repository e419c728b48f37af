//! End-to-end checks of the `jcent` binary: exit codes, JSON/CSV shapes,
//! determinism of seeded sampling.

use std::io::Write;
use std::process::{Command, Output, Stdio};

fn run(args: &[&str], stdin: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_jcent"));
    cmd.args(args).stdout(Stdio::piped()).stderr(Stdio::piped());
    cmd.stdin(if stdin.is_some() {
        Stdio::piped()
    } else {
        Stdio::null()
    });
    let mut child = cmd.spawn().unwrap();
    if let Some(text) = stdin {
        child
            .stdin
            .as_mut()
            .unwrap()
            .write_all(text.as_bytes())
            .unwrap();
    }
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

const GOOD_STATE: &str =
    r#"{"N":2,"a":[0.25,0.25],"b":[0.25,0.25],"c":[{"re":0.1,"im":0.05}]}"#;
const BAD_STATE: &str = r#"{"N":2,"a":[0.25,-0.25],"b":[0.25,0.25],"c":[{"re":0.1,"im":0.0}]}"#;

#[test]
fn validate_reads_stdin_and_reports_ok() {
    let out = run(&["validate"], Some(GOOD_STATE));
    assert_eq!(out.status.code(), Some(0));
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(parsed["ok"], true);
}

#[test]
fn validate_rejects_bad_state_with_exit_1() {
    let out = run(&["validate"], Some(BAD_STATE));
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn validate_reads_from_file() {
    let dir = std::env::temp_dir();
    let path = dir.join("jcent_cli_test_state.json");
    std::fs::write(&path, GOOD_STATE).unwrap();
    let out = run(&["validate", path.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn report_prints_criteria_json() {
    let out = run(&["report"], Some(GOOD_STATE));
    assert_eq!(out.status.code(), Some(0));
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(parsed["negativity"].as_f64().unwrap() >= 0.0);
    assert!(parsed["ccnr_norm"].as_f64().is_some());
    assert!(parsed["verdict"].is_string());
}

#[test]
fn evolve_emits_csv_with_header() {
    let out = run(
        &[
            "evolve", "--lambda", "0.5", "--m", "1.0", "--t-max", "1.0", "--steps", "5",
        ],
        None,
    );
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "t,negativity,ccnr_norm,cm_gap,verdict");
    assert_eq!(lines.count(), 5);
}

#[test]
fn scan_family_emits_csv() {
    let out = run(
        &[
            "scan-family", "--y2-max", "0.5", "--y3-max", "0.5", "--step", "0.25",
        ],
        None,
    );
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("y2,y3,negativity,ccnr_norm,cm_gap,verdict"));
    assert_eq!(text.lines().count(), 5);
}

#[test]
fn sample_is_seed_deterministic_and_warns_without_seed() {
    let a = run(&["sample", "--count", "5", "--seed", "9"], None);
    let b = run(&["sample", "--count", "5", "--seed", "9"], None);
    assert_eq!(stdout(&a), stdout(&b));
    assert_eq!(stdout(&a).lines().count(), 5);
    assert!(String::from_utf8_lossy(&a.stderr).is_empty());

    let c = run(&["sample", "--count", "1"], None);
    assert!(String::from_utf8_lossy(&c.stderr).contains("--seed"));
}

#[test]
fn sample_study_summarizes() {
    let out = run(
        &["sample", "--count", "200", "--seed", "3", "--study"],
        None,
    );
    assert_eq!(out.status.code(), Some(0));
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(parsed["total"], 200);
    assert_eq!(parsed["counterexamples"].as_array().unwrap().len(), 0);
}

#[test]
fn hull_outputs_decomposition() {
    let out = run(&["hull", "--n", "3", "--y", "0.8,0.5"], None);
    assert_eq!(out.status.code(), Some(0));
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(parsed["terms"].as_array().unwrap().len(), 7);
    assert!(parsed["reconstruction_error"].as_f64().unwrap() <= 1e-14);
}

#[test]
fn certify_family_point() {
    let out = run(&["certify", "--y2", "0.5", "--y3", "0.9"], None);
    assert_eq!(out.status.code(), Some(0));
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(parsed["verdict"], "BOUND_ENTANGLED_EDGE");
}

#[test]
fn certify_generation_point() {
    let out = run(
        &["certify", "--lambda", "0.5", "--m", "1.0", "--t", "0.05"],
        None,
    );
    assert_eq!(out.status.code(), Some(0));
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(parsed["tau1_verdict"], "BOUND_ENTANGLED_EDGE");
}

#[test]
fn certify_without_arguments_is_invalid_input() {
    let out = run(&["certify"], None);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn malformed_json_is_invalid_input() {
    let out = run(&["report"], Some("{not json"));
    assert_eq!(out.status.code(), Some(1));
}
