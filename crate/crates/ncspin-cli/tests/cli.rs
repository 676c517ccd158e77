//! End-to-end tests of the ncspin binary: exit codes, pinned report values,
//! and byte-for-byte determinism of the emitted files.

use std::collections::HashSet;
use std::process::Command;

fn run(args: &[&str]) -> (i32, String, String) {
    let output = Command::new(env!("CARGO_BIN_EXE_ncspin"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        output.status.code().expect("exit code"),
        String::from_utf8(output.stdout).expect("utf-8 stdout"),
        String::from_utf8(output.stderr).expect("utf-8 stderr"),
    )
}

fn json_rows(stdout: &str) -> Vec<serde_json::Value> {
    stdout
        .lines()
        .map(|line| serde_json::from_str(line).expect("row parses as JSON"))
        .collect()
}

#[test]
fn verify_passes_on_default_model_with_unique_checks() {
    let (code, stdout, _) = run(&["verify"]);
    assert_eq!(code, 0);
    let rows = json_rows(&stdout);
    assert!(!rows.is_empty());
    let mut seen = HashSet::new();
    for row in &rows {
        assert_eq!(row["schema"], "ncspin/1");
        assert_eq!(row["status"], "pass", "failing row: {row}");
        let key = format!("{}|{}|{}", row["suite"], row["check"], row["backend"]);
        assert!(seen.insert(key), "duplicate check row: {row}");
    }
    for suite in ["kernel", "algebra", "base", "spinor"] {
        assert!(rows.iter().any(|r| r["suite"] == suite), "missing suite {suite}");
    }
    assert_eq!(rows.iter().filter(|r| r["anchor"] == "cuntz-freeness").count(), 4);
}

#[test]
fn verify_passes_on_cuntz_backend() {
    let (code, stdout, _) = run(&["verify", "--backend", "cuntz", "--d", "2", "--cutoff", "2"]);
    assert_eq!(code, 0);
    let rows = json_rows(&stdout);
    assert!(rows.iter().all(|r| r["status"] == "pass"));
    assert!(rows.iter().any(|r| r["backend"] == "cuntz"));
}

#[test]
fn usage_errors_exit_with_code_two() {
    let (code, _, stderr) = run(&["verify", "--n", "3"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("usage error"));
    let (code, _, _) = run(&["verify", "--backend", "cuntz", "--d", "3"]);
    assert_eq!(code, 2);
    let (code, _, _) = run(&["spectrum", "--n", "4"]);
    assert_eq!(code, 2);
    let (code, _, _) = run(&["verify", "--bogus-flag"]);
    assert_eq!(code, 2);
}

#[test]
fn spectrum_reports_pinned_values_and_warnings() {
    let (code, stdout, _) = run(&["spectrum", "--cutoff", "1", "--format", "csv"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = stdout.lines().collect();
    assert_eq!(lines[0], "operator,backend,n,cutoff,eigenvalue,multiplicity,note");
    assert!(lines.contains(&"dirac,peter-weyl,2,1,-1,2,"));
    assert!(lines.contains(&"dirac,peter-weyl,2,1,1,2,"));
    assert!(lines.contains(&"spinor-laplacian,peter-weyl,2,1,0.5,4,"));

    let (code, stdout, _) = run(&["spectrum", "--cutoff", "0"]);
    assert_eq!(code, 0);
    let rows = json_rows(&stdout);
    assert!(rows
        .iter()
        .any(|r| r["operator"] == "dirac" && r["note"] == "empty field space at this cutoff"));

    let (code, stdout, _) = run(&["spectrum", "--cutoff", "2"]);
    assert_eq!(code, 0);
    let rows = json_rows(&stdout);
    assert!(rows.iter().any(|r| {
        r["operator"] == "base-laplacian-0" && r["eigenvalue"] == 2.0 && r["multiplicity"] == 3
    }));
}

#[test]
fn curvature_reports_table_scalar_and_symmetries() {
    let (code, stdout, _) = run(&["curvature"]);
    assert_eq!(code, 0);
    let rows = json_rows(&stdout);
    assert_eq!(rows.iter().filter(|r| r["kind"] == "component").count(), 16);
    assert!(rows.iter().any(|r| {
        r["kind"] == "component"
            && r["indices"] == serde_json::json!([1, 2, 1, 2])
            && r["value"] == "1"
    }));
    assert!(rows.iter().any(|r| r["kind"] == "scalar" && r["value"] == "2"));
    let symmetry: Vec<&serde_json::Value> =
        rows.iter().filter(|r| r["kind"] == "symmetry").collect();
    assert_eq!(symmetry.len(), 5);
    assert!(symmetry.iter().all(|r| r["status"] == "ok"));

    let (code, stdout, _) = run(&["curvature", "--n", "4"]);
    assert_eq!(code, 0);
    let rows = json_rows(&stdout);
    assert_eq!(rows.iter().filter(|r| r["kind"] == "component").count(), 256);
    assert!(rows.iter().any(|r| r["kind"] == "scalar" && r["value"] == "12"));
}

#[test]
fn output_is_byte_deterministic_for_fixed_config_and_seed() {
    let first = run(&["spectrum", "--cutoff", "3"]);
    let second = run(&["spectrum", "--cutoff", "3"]);
    assert_eq!(first.0, 0);
    assert_eq!(first.1, second.1);

    let first = run(&["verify", "--suite", "algebra", "--seed", "5", "--format", "csv"]);
    let second = run(&["verify", "--suite", "algebra", "--seed", "5", "--format", "csv"]);
    assert_eq!(first.0, 0);
    assert_eq!(first.1, second.1);
}

#[test]
fn out_flag_writes_the_report_file() {
    let path = std::env::temp_dir().join(format!("ncspin-report-{}.jsonl", std::process::id()));
    let path_str = path.to_str().expect("temp path is utf-8");
    let (code, stdout, _) = run(&["curvature", "--out", path_str]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    let written = std::fs::read_to_string(&path).expect("report file written");
    let (_, direct, _) = run(&["curvature"]);
    assert_eq!(written, direct);
    std::fs::remove_file(&path).ok();

    let (code, _, stderr) = run(&["curvature", "--out", "/nonexistent-dir/report.jsonl"]);
    assert_eq!(code, 1);
    assert!(stderr.contains("cannot write"));
}
