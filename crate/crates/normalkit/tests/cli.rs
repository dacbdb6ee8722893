//! End-to-end checks of the command-line driver: artifact layout and
//! exit codes 0 (success), 2 (comparison failure), 3 (bad configuration).

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use normalkit::matkit::read_matrix_market;
use normalkit::xprmt::TableResult;

fn run_cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_normalkit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn exit_code(output: &Output) -> i32 {
    output.status.code().expect("no signal")
}

fn scratch_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("normalkit-cli-{tag}"));
    fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn export_mm_writes_a_readable_matrix() {
    let output = run_cli(&["export-mm", "fd-upwind", "--n", "6", "--nu", "0.001"]);
    assert_eq!(exit_code(&output), 0, "{output:?}");
    let matrix = read_matrix_market(&output.stdout[..]).unwrap();
    assert_eq!((matrix.rows(), matrix.cols()), (6, 6));
    assert_eq!(matrix.nnz(), 16);
}

#[test]
fn export_mm_rejects_degenerate_sizes() {
    let output = run_cli(&["export-mm", "fd-upwind", "--n", "0"]);
    assert_eq!(exit_code(&output), 3);
    let output = run_cli(&["export-mm", "fem-mass", "--mesh", "1"]);
    assert_eq!(exit_code(&output), 3);
}

#[test]
fn unknown_experiment_is_a_configuration_error() {
    let output = run_cli(&["run", "bogus"]);
    assert_eq!(exit_code(&output), 3);
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("factor-sweep"), "should list the experiments: {stderr}");
}

#[test]
fn mismatched_flags_are_configuration_errors() {
    assert_eq!(exit_code(&run_cli(&["run", "l2-aniso", "--n", "5"])), 3);
    assert_eq!(exit_code(&run_cli(&["run", "fd-upwind", "--mesh", "32"])), 3);
    assert_eq!(exit_code(&run_cli(&["run", "fd-upwind", "--check", "--n", "40"])), 3);
    assert_eq!(exit_code(&run_cli(&["run", "rd-direct", "--check"])), 3);
    assert_eq!(exit_code(&run_cli(&["run", "history", "--check"])), 3);
}

#[test]
fn help_and_version_succeed() {
    assert_eq!(exit_code(&run_cli(&["--help"])), 0);
    assert_eq!(exit_code(&run_cli(&["--version"])), 0);
    assert_eq!(exit_code(&run_cli(&["run", "--help"])), 0);
}

#[test]
fn run_writes_table_artifacts_and_compare_judges_them() {
    let dir = scratch_dir("artifacts");
    let out_dir = dir.join("out");
    let log = dir.join("run.log");

    let output = run_cli(&[
        "run",
        "fd-upwind",
        "--n",
        "40",
        "--nu",
        "1e-3",
        "--out",
        out_dir.to_str().unwrap(),
        "--log",
        log.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&output), 0, "{output:?}");

    let json_path = out_dir.join("fd-upwind.json");
    let table = TableResult::from_json(&fs::read_to_string(&json_path).unwrap()).unwrap();
    assert_eq!(table.experiment, "fd-upwind");
    assert_eq!(table.col_labels, ["gmres-p", "cgne-rtr", "cgne-ptp"]);
    assert_eq!(table.rows.len(), 1);

    let csv = fs::read_to_string(out_dir.join("fd-upwind.csv")).unwrap();
    assert!(csv.starts_with("nu,gmres-p,cgne-rtr,cgne-ptp\n"));

    for line in fs::read_to_string(&log).unwrap().lines() {
        let record: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(record["experiment"], "fd-upwind");
        assert_eq!(record["metadata"]["config"]["n"], "40");
    }

    let accepting = dir.join("accepting.json");
    fs::write(
        &accepting,
        r#"{"experiment":"fd-upwind","col_labels":["gmres-p","cgne-rtr","cgne-ptp"],
            "rows":[{"param":"0.001","cells":[{},{},{}]}]}"#,
    )
    .unwrap();
    let output = run_cli(&["compare", json_path.to_str().unwrap(), accepting.to_str().unwrap()]);
    assert_eq!(exit_code(&output), 0, "{output:?}");

    let rejecting = dir.join("rejecting.json");
    fs::write(
        &rejecting,
        r#"{"experiment":"fd-upwind","col_labels":["gmres-p","cgne-rtr","cgne-ptp"],
            "rows":[{"param":"0.001","cells":[{"count":1000},{},{}]}]}"#,
    )
    .unwrap();
    let output = run_cli(&["compare", json_path.to_str().unwrap(), rejecting.to_str().unwrap()]);
    assert_eq!(exit_code(&output), 2, "{output:?}");
    assert!(String::from_utf8_lossy(&output.stdout).contains("FAIL"));

    let output = run_cli(&["compare", json_path.to_str().unwrap(), "no-such-reference"]);
    assert_eq!(exit_code(&output), 3);

    let output = run_cli(&["compare", json_path.to_str().unwrap(), "fd-upwind"]);
    assert_eq!(exit_code(&output), 3, "bundled reference has a different shape");

    fs::remove_dir_all(&dir).ok();
}

#[test]
fn history_run_emits_step_res_traces() {
    // The nested path does not exist yet; the run must create it.
    let dir = scratch_dir("history").join("traces");
    let output = run_cli(&[
        "run",
        "history",
        "--mesh",
        "16",
        "--nu",
        "0.01",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&output), 0, "{output:?}");
    let files: Vec<_> = fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "csv"))
        .collect();
    assert_eq!(files.len(), 1);
    let text = fs::read_to_string(&files[0]).unwrap();
    assert!(text.starts_with("step,res\n"));
    assert!(text.lines().count() >= 3);
    fs::remove_dir_all(dir.parent().unwrap()).ok();
}
