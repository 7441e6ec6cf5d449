//! End-to-end tests of the binary: exit codes, output formats, manifests,
//! and reproducibility.

use std::path::Path;
use std::process::{Command, Output};

fn hypack(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hypack"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn bounds_single_cell_m2() {
    let out = hypack(&["bounds", "--m", "2", "--R", "1"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "m,R,epsilon,log_L,log_main,tau,log_delta,log_lambda,notes"
    );
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row[0], "2");
    assert_eq!(row[8], "no-root");
    assert_eq!(row[5], "", "tau column empty on no-root rows");
    let log_l: f64 = row[3].parse().unwrap();
    let expected = ((1.0f64.cosh() - 1.0) / (2.0f64.cosh() - 1.0)).ln();
    assert!((log_l - expected).abs() < 1e-9);
}

#[test]
fn bounds_rooted_cell_has_improvement_factor() {
    let out = hypack(&["bounds", "--m", "10000", "--R", "1", "--epsilon", "0.1"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    let log_l: f64 = row[3].parse().unwrap();
    let log_main: f64 = row[4].parse().unwrap();
    let tau: f64 = row[5].parse().unwrap();
    assert!((tau - 0.42).abs() <= 0.05);
    assert!(row[8].is_empty());
    // Gap = ln(0.9 * 1e4 * ln(sqrt(1e4) cosh 2)).
    let factor = (0.9 * 1e4 * (100.0 * 2.0f64.cosh()).ln()).ln();
    assert!((log_main - log_l - factor).abs() < 1e-3);
}

#[test]
fn bounds_geometric_grid_and_json() {
    let out = hypack(&[
        "bounds", "--m", "100:10000:3", "--R", "0.5,1", "--format", "json",
    ]);
    assert_eq!(code(&out), 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 6);
    assert_eq!(rows[0]["m"], 100);
    assert_eq!(rows[2]["m"], 1000);
    assert_eq!(rows[4]["m"], 10000);
    assert!(doc["manifest"]["version"].is_string());
}

#[test]
fn bounds_usage_errors_exit_2() {
    let out = hypack(&["bounds", "--m", "2", "--R", ""]);
    assert_eq!(code(&out), 2);
    let out = hypack(&["bounds", "--m", "2", "--R", "1", "--epsilon", "1.5"]);
    assert_eq!(code(&out), 2);
    let out = hypack(&["bounds", "--m", "2"]);
    assert_eq!(code(&out), 2, "missing required flag goes through clap");
}

#[test]
fn bounds_linear_refuses_overflow_exit_3() {
    // ln Delta ~ 2e4 at m = 1e4: far beyond exp() range.
    let out = hypack(&["bounds", "--m", "10000", "--R", "1", "--linear"]);
    assert_eq!(code(&out), 3);
    // Small cells are fine in linear scale.
    let out = hypack(&["bounds", "--m", "2", "--R", "1", "--linear"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.starts_with("m,R,epsilon,L,main,"));
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    let lin: f64 = row[3].parse().unwrap();
    assert!((lin - 0.196612).abs() < 1e-6);
}

#[test]
fn bounds_csv_manifest_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("table.csv");
    let out = hypack(&["bounds", "--m", "2,3", "--R", "1", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(path.exists());
    let manifest_path = dir.path().join("table.csv.manifest.json");
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(manifest_path).unwrap()).unwrap();
    assert_eq!(manifest["command"], "bounds");
    assert_eq!(manifest["parameters"]["epsilon"], 0.1);
}

#[test]
fn simulate_smoke_run_writes_result_and_points() {
    let dir = tempfile::tempdir().unwrap();
    let json_path = dir.path().join("run.json");
    let csv_path = dir.path().join("points.csv");
    let out = hypack(&[
        "simulate", "--m", "2", "--R", "0.5", "--L", "4", "--target-degree", "20",
        "--seed", "1", "--mc-samples", "2000",
        "--codegree-cap", "20",
        "--out", json_path.to_str().unwrap(),
        "--points", csv_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json_path).unwrap()).unwrap();
    assert_eq!(doc["result"]["packing_valid"], true);
    let kept = doc["result"]["kept"].as_array().unwrap();
    assert!(!kept.is_empty());
    assert!(doc["result"]["density_core"].as_f64().unwrap() > 0.0);
    // Points CSV: header plus one line per sampled point.
    let csv = std::fs::read_to_string(&csv_path).unwrap();
    assert!(csv.starts_with("idx,x1,x2,xm1,kept,pruned_reason\n"));
    let n_initial = doc["result"]["n_initial"].as_u64().unwrap() as usize;
    assert_eq!(csv.lines().count(), n_initial + 1);
    assert!(Path::new(&format!("{}.manifest.json", csv_path.display())).exists());
}

#[test]
fn simulate_default_caps_prune_everything_but_isolated() {
    // At desk scale the formula codegree cap is below 1: survivors are the
    // 2R-isolated points, so the packing is tiny or empty but still valid
    // (exit 0).
    let out = hypack(&[
        "simulate", "--m", "2", "--R", "0.5", "--L", "4", "--target-degree", "20",
        "--seed", "1", "--mc-samples", "500",
    ]);
    assert_eq!(code(&out), 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["result"]["packing_valid"], true);
    let pruned = doc["result"]["pruned_degree"].as_array().unwrap().len()
        + doc["result"]["pruned_codegree"].as_array().unwrap().len();
    let n = doc["result"]["n_initial"].as_u64().unwrap() as usize;
    assert!(pruned as f64 >= 0.9 * n as f64);
}

#[test]
fn simulate_lambda_zero_gives_empty_packing() {
    let out = hypack(&[
        "simulate", "--m", "2", "--R", "0.5", "--L", "4", "--lambda", "0",
    ]);
    assert_eq!(code(&out), 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["result"]["n_initial"], 0);
    assert_eq!(doc["result"]["density_core"], 0.0);
}

#[test]
fn simulate_config_error_exit_2() {
    // L <= 4R violates the core-region invariant.
    let out = hypack(&[
        "simulate", "--m", "2", "--R", "0.5", "--L", "1", "--target-degree", "20",
    ]);
    assert_eq!(code(&out), 2);
    // Missing intensity entirely.
    let out = hypack(&["simulate", "--m", "2", "--R", "0.5", "--L", "4"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn simulate_resource_refusal_exit_3() {
    let out = hypack(&[
        "simulate", "--m", "2", "--R", "0.5", "--L", "4", "--lambda", "1e9",
    ]);
    assert_eq!(code(&out), 3);
}

#[test]
fn simulate_reruns_are_bit_identical() {
    let run = || {
        let out = hypack(&[
            "simulate", "--m", "3", "--R", "0.4", "--L", "2", "--target-degree", "10",
            "--seed", "11", "--codegree-cap", "10",
        ]);
        assert_eq!(code(&out), 0);
        let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
        serde_json::to_string(&doc["result"]).unwrap()
    };
    assert_eq!(run(), run());
}

#[test]
fn verify_geometry_reports_checks() {
    let out = hypack(&["verify", "geometry"]);
    assert_eq!(code(&out), 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["passed"], true);
    assert!(doc["checks"].as_array().unwrap().len() >= 5);
    for check in doc["checks"].as_array().unwrap() {
        assert!(check["pass"].as_bool().unwrap(), "{}", check["name"]);
        assert!(check["margin"].is_number());
        assert!(check["tolerance"].is_number());
    }
}

#[test]
fn verify_seeded_reports_are_identical() {
    let run = || {
        let out = hypack(&["verify", "poisson", "--seed", "7"]);
        assert_eq!(code(&out), 0);
        let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
        serde_json::to_string(&doc["checks"]).unwrap()
    };
    assert_eq!(run(), run());
}

#[test]
fn verify_unknown_suite_exit_2() {
    let out = hypack(&["verify", "astrology"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn cohn_zhao_table() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("codes.csv");
    // Antipodal row (theta = pi, 2 points) and the m = 8 kissing row.
    std::fs::write(
        &table,
        "theta,log_A\n3.141592653589793,0.6931471805599453\n1.0471975511965976,5.4806389233419912\n",
    )
    .unwrap();
    let out = hypack(&["cohn-zhao", "--m", "8", "--codes", table.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let log_bound = doc["log_bound"].as_f64().unwrap();
    // min(ln 2, 7 ln sin(pi/6) + ln 240) = ln(240/128) = 0.62861.
    assert!((log_bound - (240.0f64 / 128.0).ln()).abs() < 1e-9);

    let out = hypack(&["cohn-zhao", "--m", "8", "--codes", "/nonexistent.csv"]);
    assert_eq!(code(&out), 2);
    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "wrong,header\n1,2\n").unwrap();
    let out = hypack(&["cohn-zhao", "--m", "8", "--codes", bad.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
}

#[test]
fn workers_flag_does_not_change_output() {
    let text_of = |workers: &str| {
        let out = hypack(&[
            "bounds", "--m", "100,1000,10000", "--R", "0.5,1,2", "--workers", workers,
        ]);
        assert_eq!(code(&out), 0);
        stdout(&out)
    };
    assert_eq!(text_of("1"), text_of("4"));
}
