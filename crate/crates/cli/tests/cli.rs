//! End-to-end tests against the compiled binary: exit codes, CSV
//! artifacts, golden values, and byte determinism.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_steklov")
}

fn run_with_config(subcommand: &str, config: &str, dir: &Path) -> Output {
    let config_path = dir.join("run.cfg");
    std::fs::write(&config_path, config).unwrap();
    Command::new(bin())
        .arg(subcommand)
        .arg("--config")
        .arg(&config_path)
        .arg("--out")
        .arg(dir)
        .output()
        .unwrap()
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("process exited")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn parse_csv(path: &Path) -> Vec<Vec<String>> {
    let text = std::fs::read_to_string(path).unwrap();
    text.lines()
        .map(|l| l.split(',').map(|s| s.to_string()).collect())
        .collect()
}

#[test]
fn evolve_constant_weight_golden_value() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_with_config(
        "evolve",
        "subcommand=evolve\ngenerator=dilation\nweight=constant:1.0\ndata=monomial:3\nt=0.5\nN=256\n",
        dir.path(),
    );
    assert_eq!(exit_code(&out), 0, "{}", stderr(&out));
    let rows = parse_csv(&dir.path().join("evolve.csv"));
    assert_eq!(rows[0], vec!["t", "theta", "re_u", "im_u"]);
    assert_eq!(rows.len(), 1 + 256);
    // theta = 0 is the first data row of the t = 0.5 block.
    let re_u: f64 = rows[1][2].parse().unwrap();
    let theta: f64 = rows[1][1].parse().unwrap();
    assert_eq!(theta, 0.0);
    assert!((re_u - (-1.0f64).exp()).abs() < 1e-6, "re_u {re_u}");
}

#[test]
fn flow_dilation_golden_value() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_with_config(
        "flow",
        "subcommand=flow\ngenerator=dilation\nz0=0.5,0\nt=0.6931471805599453\n",
        dir.path(),
    );
    assert_eq!(exit_code(&out), 0, "{}", stderr(&out));
    let rows = parse_csv(&dir.path().join("flow.csv"));
    assert_eq!(rows[0], vec!["t", "re_z", "im_z", "re_dz", "im_dz"]);
    let last = rows.last().unwrap();
    let re_z: f64 = last[1].parse().unwrap();
    let re_dz: f64 = last[3].parse().unwrap();
    assert!((re_z - 0.25).abs() < 1e-9, "re_z {re_z}");
    // phi_t'(z) = e^{-t} = 0.5 for the linear flow.
    assert!((re_dz - 0.5).abs() < 1e-9, "re_dz {re_dz}");
}

#[test]
fn identical_configs_give_identical_bytes() {
    let config = "subcommand=evolve\ngenerator=parabolic\nweight=series:0,0;0.5,0\ndata=named:decay\nt=0.1,0.4\nN=64\n";
    let dir_a = tempfile::tempdir().unwrap();
    let dir_b = tempfile::tempdir().unwrap();
    let out_a = run_with_config("evolve", config, dir_a.path());
    let out_b = run_with_config("evolve", config, dir_b.path());
    assert_eq!(exit_code(&out_a), 0, "{}", stderr(&out_a));
    assert_eq!(exit_code(&out_b), 0, "{}", stderr(&out_b));
    let bytes_a = std::fs::read(dir_a.path().join("evolve.csv")).unwrap();
    let bytes_b = std::fs::read(dir_b.path().join("evolve.csv")).unwrap();
    assert!(!bytes_a.is_empty());
    assert_eq!(bytes_a, bytes_b);
}

#[test]
fn unknown_key_is_config_error_with_line() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_with_config("verify", "subcommand=verify\nweigth=zero\n", dir.path());
    assert_eq!(exit_code(&out), 1);
    let msg = stderr(&out);
    assert!(msg.contains("line 2"), "{msg}");
    assert!(msg.contains("weigth"), "{msg}");
}

#[test]
fn missing_subcommand_is_named() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_with_config("verify", "N=256\n", dir.path());
    assert_eq!(exit_code(&out), 1);
    assert!(stderr(&out).contains("subcommand"), "{}", stderr(&out));
}

#[test]
fn grid_size_must_be_power_of_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_with_config("verify", "subcommand=verify\nN=100\n", dir.path());
    assert_eq!(exit_code(&out), 1);
    assert!(stderr(&out).contains("power of two"), "{}", stderr(&out));
}

#[test]
fn subcommand_mismatch_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_with_config("flow", "subcommand=verify\n", dir.path());
    assert_eq!(exit_code(&out), 1);
    assert!(stderr(&out).contains("mismatch"), "{}", stderr(&out));
}

#[test]
fn non_analytic_data_is_invariant_failure() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_with_config(
        "evolve",
        "subcommand=evolve\ngenerator=dilation\ndata=monomial:-1\nt=0.5\n",
        dir.path(),
    );
    assert_eq!(exit_code(&out), 3, "{}", stderr(&out));
}

#[test]
fn unreachable_tolerance_is_numerical_failure() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_with_config(
        "flow",
        "subcommand=flow\ngenerator=dilation\nz0=0.5,0\nt=1.0\ntol=1e-30\n",
        dir.path(),
    );
    assert_eq!(exit_code(&out), 2, "{}", stderr(&out));
}

#[test]
fn map_emits_boundary_table_with_unit_normals() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_with_config(
        "map",
        "subcommand=map\ndomain=star-cos:1.0,0.2\nN=64\n",
        dir.path(),
    );
    assert_eq!(exit_code(&out), 0, "{}", stderr(&out));
    let rows = parse_csv(&dir.path().join("map.csv"));
    assert_eq!(rows[0], vec!["theta", "sigma", "re_x", "im_x", "re_nu", "im_nu"]);
    assert_eq!(rows.len(), 1 + 64);
    for row in &rows[1..] {
        let re_nu: f64 = row[4].parse().unwrap();
        let im_nu: f64 = row[5].parse().unwrap();
        assert!((re_nu.hypot(im_nu) - 1.0).abs() < 1e-10);
    }
}

#[test]
fn verify_passes_and_writes_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_with_config("verify", "subcommand=verify\n", dir.path());
    assert_eq!(exit_code(&out), 0, "{}", stderr(&out));
    let report = parse_csv(&dir.path().join("verify.csv"));
    assert_eq!(report[0], vec!["check_name", "residual", "tolerance", "pass_flag"]);
    assert!(report.len() >= 13);
    for row in &report[1..] {
        assert_eq!(row[3], "1", "failing check {}", row[0]);
    }
    let pairing = parse_csv(&dir.path().join("pairing.csv"));
    assert_eq!(pairing.len(), 1 + 9);
    for row in &pairing[1..] {
        let re: f64 = row[1].parse().unwrap();
        assert!((re - 1.0).abs() < 1e-6);
        assert_eq!(row[3], "1");
    }
}
