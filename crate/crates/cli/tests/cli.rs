//! Process-level tests of the `qbound` binary: exit codes, output files,
//! and run-to-run determinism.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn qbound(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qbound"))
        .args(args)
        .output()
        .expect("binary should launch")
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn magfield_output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let csv_a = dir.path().join("a.csv");
    let csv_b = dir.path().join("b.csv");
    let json_a = dir.path().join("a.json");

    let first = qbound(&[
        "magfield",
        "--csv",
        csv_a.to_str().unwrap(),
        "--json",
        json_a.to_str().unwrap(),
    ]);
    assert!(first.status.success(), "{}", String::from_utf8_lossy(&first.stderr));
    let second = qbound(&["magfield", "--csv", csv_b.to_str().unwrap()]);
    assert!(second.status.success());

    let a = fs::read(&csv_a).unwrap();
    let b = fs::read(&csv_b).unwrap();
    assert!(!a.is_empty());
    assert_eq!(a, b, "two runs should emit byte-identical CSV");

    let header = String::from_utf8_lossy(&a);
    assert!(header.starts_with("scenario_id,n,quantity,index,value,method"));
    assert!(json_a.exists());
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&json_a).unwrap()).unwrap();
    assert!(report.is_object());
}

#[test]
fn scaling_slope_lands_on_the_entangled_exponent() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "scaling.json",
        r#"{
          "scenario_id": "slope_e2e",
          "probe": { "kind": "ghz", "axis": 3 },
          "channel": { "kind": "dephasing", "lambda": 0.3 },
          "theta": [0.3, 0.2, 0.1],
          "n_list": [4, 8, 16, 32, 64, 128, 256, 512],
          "compute": ["jq_rdm"],
          "seed": 0
        }"#,
    );
    let csv = dir.path().join("scaling.csv");
    let out = qbound(&["scaling", "--config", &cfg, "--csv", csv.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let mut slope = None;
    let mut reader = csv::Reader::from_path(&csv).unwrap();
    for record in reader.records() {
        let record = record.unwrap();
        if &record[2] == "qfim_max_eig_slope" {
            slope = Some(record[4].parse::<f64>().unwrap());
        }
    }
    let slope = slope.expect("slope row missing from CSV");
    assert!(
        (slope - 2.0).abs() < 0.05,
        "end-to-end slope {slope} drifted from the quadratic exponent"
    );
}

#[test]
fn check_subcommand_reports_all_green() {
    let out = qbound(&["check", "--seed", "3", "--count", "6"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("checks passed"), "unexpected output:\n{stdout}");
    assert!(!stdout.contains("FAIL"), "a self-check failed:\n{stdout}");
}

#[test]
fn malformed_config_exits_with_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "broken.json", "{ this is not json");
    let out = qbound(&["qfim", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn missing_config_file_exits_with_usage_error() {
    let out = qbound(&["qfim", "--config", "/nonexistent/nowhere.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn indefinite_povm_with_negative_probability_is_a_contract_failure() {
    // The POVM below is complete but has indefinite elements; on this state
    // family one outcome acquires probability −1/2, which the measured-FIM
    // path must reject as a contract violation (exit 1), not a usage error.
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "bad_povm.json",
        r#"{
          "scenario_id": "bad_povm",
          "probe": { "kind": "explicit", "rho": { "dim": 2, "entries": [[1,0],[0,0],[0,0],[0,0]] } },
          "channel": { "kind": "unitary" },
          "theta": [0.3],
          "n_list": [1],
          "compute": ["fim_fd"],
          "povm": { "kind": "explicit", "elements": [
            { "dim": 2, "entries": [[1.5,0],[0,0],[0,0],[-0.5,0]] },
            { "dim": 2, "entries": [[-0.5,0],[0,0],[0,0],[1.5,0]] }
          ] },
          "seed": 0
        }"#,
    );
    let out = qbound(&["fim", "--config", &cfg]);
    assert_eq!(
        out.status.code(),
        Some(1),
        "stdout: {}\nstderr: {}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(
        stderr.contains("probability"),
        "error should name the negative probability, got: {stderr}"
    );
}

#[test]
fn qfim_run_emits_cross_checked_rows() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "qfim.json",
        r#"{
          "scenario_id": "qfim_e2e",
          "probe": { "kind": "ghz", "axis": 3 },
          "channel": { "kind": "dephasing", "lambda": 0.3 },
          "theta": [0.3, 0.2, 0.1],
          "n_list": [2, 3],
          "compute": ["jq_rdm", "jq_exact"],
          "seed": 0
        }"#,
    );
    let csv = dir.path().join("qfim.csv");
    let out = qbound(&["qfim", "--config", &cfg, "--csv", csv.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let mut gap_rows = 0usize;
    let mut reader = csv::Reader::from_path(&csv).unwrap();
    for record in reader.records() {
        let record = record.unwrap();
        if &record[2] == "jq_rel_gap" {
            gap_rows += 1;
            let gap = record[4].parse::<f64>().unwrap();
            assert!(gap < 1e-8, "cross-check gap {gap} at n={}", &record[1]);
        }
    }
    assert_eq!(gap_rows, 2, "expected one cross-check row per register size");
}
