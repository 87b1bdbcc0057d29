//! Integration tests for the `lgsim` binary: subcommand output, file
//! formats, and exit codes.

use std::fs;
use std::process::{Command, Output};

fn lgsim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lgsim"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn point_reports_the_full_inequality_set() {
    let out = lgsim(&[
        "point",
        "--theta1",
        "1.0471975511965976",
        "--theta2",
        "1.0471975511965976",
        "--epsilon",
        "1.0",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("K12 = 0.5"), "{text}");
    assert!(text.contains("B1* = 1.66812224599"), "{text}");
    assert!(text.contains("B1 = 0.75"), "{text}");
    assert!(text.contains("venn (A1, A2, A3)"), "{text}");
    assert!(text.contains("consistent"), "{text}");
}

#[test]
fn point_accepts_degrees() {
    let radians = lgsim(&["point", "--theta1", "1.5707963267948966", "--theta2", "0"]);
    let degrees = lgsim(&["point", "--theta1", "90", "--theta2", "0", "--degrees"]);
    assert_eq!(stdout(&radians), stdout(&degrees));
}

#[test]
fn point_rejects_out_of_range_strength() {
    let out = lgsim(&["point", "--theta1", "0", "--theta2", "0", "--epsilon", "2"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_with_one_and_help_with_zero() {
    let out = lgsim(&["point", "--theta1", "not-a-number", "--theta2", "0"]);
    assert_eq!(out.status.code(), Some(1));
    let out = lgsim(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn sweep_writes_csv_and_prints_the_summary() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("out.csv");
    let config_path = dir.path().join("sweep.cfg");
    fs::write(
        &config_path,
        format!(
            "theta1_range = [0, 3.141592653589793, 7]\n\
             symmetric = true\n\
             epsilon_values = [0.0, 1.0]\n\
             output_path = {}\n",
            csv_path.display()
        ),
    )
    .unwrap();
    let out = lgsim(&["sweep", "--config", config_path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.contains("wrote 14 rows"), "{text}");
    assert!(text.contains("naive apparent violations"), "{text}");

    let csv = fs::read_to_string(&csv_path).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap().split(',').count(),
        21,
        "header has the full column set"
    );
    assert_eq!(lines.count(), 14);
}

#[test]
fn sweep_json_is_parseable_and_carries_the_summary() {
    let dir = tempfile::tempdir().unwrap();
    let json_path = dir.path().join("out.json");
    let config_path = dir.path().join("sweep.cfg");
    fs::write(
        &config_path,
        format!(
            "theta1_range = [0.5, 1.5, 2]\n\
             theta2_range = [0.5, 0.5, 1]\n\
             format = json\n\
             sample_count = 100\n\
             seed = 5\n\
             output_path = {}\n",
            json_path.display()
        ),
    )
    .unwrap();
    let out = lgsim(&["sweep", "--config", config_path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&json_path).unwrap()).unwrap();
    assert_eq!(doc["rows"].as_array().unwrap().len(), 2);
    assert_eq!(doc["summary"]["rng"], "splitmix64");
    assert_eq!(doc["summary"]["seed"], 5);
    assert!(doc["rows"][0]["sample"]["counts"].is_array());
}

#[test]
fn sweep_exit_codes_distinguish_io_and_config_errors() {
    let out = lgsim(&["sweep", "--config", "/nonexistent/path.cfg"]);
    assert_eq!(out.status.code(), Some(3));

    let dir = tempfile::tempdir().unwrap();
    let config_path = dir.path().join("bad.cfg");
    fs::write(&config_path, "epsilon_values = [2.0]\n").unwrap();
    let out = lgsim(&["sweep", "--config", config_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn sample_is_deterministic_and_labels_the_generator() {
    let args = [
        "sample", "--theta1", "0", "--theta2", "0", "--epsilon", "1", "--n", "1000", "--seed",
        "9",
    ];
    let a = lgsim(&args);
    let b = lgsim(&args);
    assert!(a.status.success());
    assert_eq!(stdout(&a), stdout(&b));
    let text = stdout(&a);
    assert!(text.starts_with("# rng: splitmix64, seed: 9, n: 1000"), "{text}");
    // Aligned angles: all mass on |000> and |111>, perfect correlators.
    assert!(text.contains("K12_hat = 1 +- 0"), "{text}");
}

#[test]
fn sample_rejects_zero_draws() {
    let out = lgsim(&[
        "sample", "--theta1", "0", "--theta2", "0", "--n", "0",
    ]);
    assert_eq!(out.status.code(), Some(1));
}
