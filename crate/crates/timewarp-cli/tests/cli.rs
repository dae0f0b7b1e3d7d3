//! End-to-end exercises of the command-line surface.

use std::process::Command;

fn timewarp() -> Command {
    Command::new(env!("CARGO_BIN_EXE_timewarp"))
}

#[test]
fn validate_bundled_tasks_exits_zero() {
    let output = timewarp().arg("validate").output().unwrap();
    assert!(output.status.success(), "{}", String::from_utf8_lossy(&output.stderr));
    let stdout = String::from_utf8_lossy(&output.stdout);
    assert!(stdout.contains("manifest totals match"), "{stdout}");
}

#[test]
fn unknown_subcommand_fails_with_usage() {
    let output = timewarp().arg("frobnicate").output().unwrap();
    assert!(!output.status.success());
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("Usage") || stderr.contains("unrecognized"), "{stderr}");
}

#[test]
fn oracle_run_prints_a_full_success_table() {
    let output = timewarp()
        .args(["run", "--agent", "scripted:oracle", "--versions", "v6", "--judge", "rule"])
        .output()
        .unwrap();
    assert!(output.status.success(), "{}", String::from_utf8_lossy(&output.stderr));
    let stdout = String::from_utf8_lossy(&output.stdout);
    assert!(stdout.contains("overall"), "{stdout}");
    assert!(stdout.contains("100.0%"), "{stdout}");
}

#[test]
fn collect_then_build_data_produces_records() {
    let dir = tempfile::tempdir().unwrap();
    let store = dir.path().join("store");
    let output = timewarp()
        .args([
            "collect",
            "rollout",
            "--versions",
            "v1,v6",
            "--teacher",
            "scripted:oracle",
            "--out",
        ])
        .arg(&store)
        .output()
        .unwrap();
    assert!(output.status.success(), "{}", String::from_utf8_lossy(&output.stderr));
    let stdout = String::from_utf8_lossy(&output.stdout);
    assert!(stdout.contains("kept 56"), "{stdout}"); // 28 goals x 2 versions

    let records = dir.path().join("bc.jsonl");
    let output = timewarp()
        .args(["build-data", "--mask", "a", "--versions", "v6", "--store"])
        .arg(&store)
        .arg("--out")
        .arg(&records)
        .output()
        .unwrap();
    assert!(output.status.success(), "{}", String::from_utf8_lossy(&output.stderr));
    assert!(records.exists());
    assert!(records.with_extension("manifest.json").exists());
    let first_line = std::fs::read_to_string(&records)
        .unwrap()
        .lines()
        .next()
        .unwrap()
        .to_string();
    let record: serde_json::Value = serde_json::from_str(&first_line).unwrap();
    let target = record["target"].as_str().unwrap();
    assert!(target.contains("<action>"));
    assert!(!target.contains("<think>"));
}

#[test]
fn collect_plans_writes_editable_files() {
    let dir = tempfile::tempdir().unwrap();
    let output = timewarp()
        .args(["collect", "plans", "--planner", "bundled", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(output.status.success(), "{}", String::from_utf8_lossy(&output.stderr));
    let plan = dir.path().join("wiki-fact-everest.plan");
    assert!(plan.exists());
    let body = std::fs::read_to_string(plan).unwrap();
    assert!(body.contains("1. Search for 'Mount Everest'."));
}
