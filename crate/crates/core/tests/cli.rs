use std::fs;
use std::path::PathBuf;

use column_climber::cli::{run, SWEEP_HEADER};

fn config_path() -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("configs/table3.cfg")
        .display()
        .to_string()
}

fn catalog_path() -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("configs/motors.csv")
        .display()
        .to_string()
}

fn invoke(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut full = vec!["climber-design"];
    full.extend_from_slice(args);
    let code = run(full, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

#[test]
fn sweep_emits_69_rows() {
    let cfg = config_path();
    let (code, out, err) = invoke(&[
        "sweep", "--config", &cfg, "--min", "60", "--max", "400", "--step", "5",
    ]);
    assert_eq!(code, 0, "{err}");
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], SWEEP_HEADER);
    assert_eq!(lines.len(), 70);
    assert!(out.ends_with('\n') && !out.contains('\r'));
    assert!(lines[1].starts_with("60,2,0,"));
    let torques: Vec<f64> = lines[1..]
        .iter()
        .map(|l| l.split(',').nth(5).unwrap().parse().unwrap())
        .collect();
    assert!(torques.windows(2).all(|w| w[1] >= w[0]));
    assert!(err.contains("config_fingerprint: "));
    assert!(err.contains("max_climbable_diameter_mm: 270"));
}

#[test]
fn sweep_output_is_byte_identical() {
    let cfg = config_path();
    let args = ["sweep", "--config", cfg.as_str(), "--step", "5"];
    let (_, a, _) = invoke(&args);
    let (_, b, _) = invoke(&args);
    assert_eq!(a, b);
}

#[test]
fn sweep_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("curve.csv");
    let cfg = config_path();
    let (code, out, _) = invoke(&[
        "sweep",
        "--config",
        &cfg,
        "--min",
        "80",
        "--max",
        "100",
        "--step",
        "10",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let csv = fs::read_to_string(&path).unwrap();
    assert_eq!(csv.lines().count(), 4);
    assert!(csv.contains("\n90,3,0,188.454,6.822,3.5398,"));
    assert!(out.contains("points: 3"));
}

#[test]
fn sweep_rejects_bad_range() {
    let cfg = config_path();
    let (code, _, err) = invoke(&["sweep", "--config", &cfg, "--min", "400", "--max", "60"]);
    assert_eq!(code, 2);
    assert!(err.contains("invalid diameter range"));
}

#[test]
fn check_at_90mm() {
    let cfg = config_path();
    let (code, out, _) = invoke(&["check", "--config", &cfg, "--diameter", "90"]);
    assert_eq!(code, 0);
    assert!(out.contains("\nlinks: 3\n"));
    assert!(out.contains("\nfeasible: true\n"));
    assert!(out.starts_with("config_fingerprint: "));
}

#[test]
fn check_infeasible_is_exit_1() {
    let cfg = config_path();
    let (code, out, _) = invoke(&["check", "--config", &cfg, "--diameter", "300"]);
    assert_eq!(code, 1);
    assert!(out.contains("feasible: false"));
}

#[test]
fn check_rejects_zero_diameter() {
    let cfg = config_path();
    let (code, _, err) = invoke(&["check", "--config", &cfg, "--diameter", "0"]);
    assert_eq!(code, 2);
    assert!(err.contains("d_c"), "{err}");
}

#[test]
fn check_with_fixed_configuration() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cal.cfg");
    let text = column_climber::config::REFERENCE_CONFIG.replace("w_b = 20", "w_b = 33");
    fs::write(&cfg, text).unwrap();
    let (code, out, _) = invoke(&[
        "check",
        "--config",
        cfg.to_str().unwrap(),
        "--diameter",
        "90",
        "--links",
        "3",
        "--tail-weights",
        "4",
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("total_mass_kg: 7.866"));
}

#[test]
fn usage_errors_exit_2() {
    let (code, _, _) = invoke(&["check", "--diameter", "90"]);
    assert_eq!(code, 2);
    let (code, _, _) = invoke(&["frobnicate"]);
    assert_eq!(code, 2);
    let (code, _, err) = invoke(&["check", "--config", "/nonexistent.cfg", "--diameter", "90"]);
    assert_eq!(code, 2);
    assert!(err.contains("nonexistent"));
}

#[test]
fn bad_config_values_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    fs::write(
        &cfg,
        column_climber::config::REFERENCE_CONFIG.replace("mu_W = 0.7", "mu_W = -0.1"),
    )
    .unwrap();
    let (code, _, err) = invoke(&[
        "check",
        "--config",
        cfg.to_str().unwrap(),
        "--diameter",
        "90",
    ]);
    assert_eq!(code, 2);
    assert!(err.contains("mu_W"));
}

#[test]
fn help_documents_units() {
    let (code, out, _) = invoke(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("mm"));
    assert!(out.contains("E_rubber"));
}

#[test]
fn selflock_report() {
    let cfg = config_path();
    let (code, out, _) = invoke(&["selflock", "--config", &cfg, "--diameter", "90"]);
    assert_eq!(code, 0);
    assert!(out.contains("d1_threshold_mm: 26.061"));
    assert!(out.contains("d2_mm: 90"));
    assert!(out.contains("self_lock: true"));
    assert!(out.contains("denominator_sign: -1"));
}

#[test]
fn motors_against_catalog() {
    let cfg = config_path();
    let cat = catalog_path();
    let (code, out, _) = invoke(&["motors", "--config", &cfg, "--catalog", &cat]);
    assert_eq!(code, 0);
    let rows: Vec<&str> = out.lines().skip(2).collect();
    // 3 diameters × 2 motors × 2 roles.
    assert_eq!(rows.len(), 12);
    assert!(rows
        .iter()
        .any(|r| r.starts_with("220,drive,drive,4.22783,6.865,")));
}

#[test]
fn undersized_catalog_fails() {
    let dir = tempfile::tempdir().unwrap();
    let cat = dir.path().join("small.csv");
    fs::write(&cat, "name,rated_torque_nm,rated_speed_rpm\ntiny,0.1,100\n").unwrap();
    let cfg = config_path();
    let (code, out, _) = invoke(&[
        "motors",
        "--config",
        &cfg,
        "--catalog",
        cat.to_str().unwrap(),
    ]);
    assert_eq!(code, 1);
    assert!(out.contains(",false,"));
}

#[test]
fn verify_small_batch() {
    let cfg = config_path();
    let (code, out, _) = invoke(&[
        "verify",
        "--config",
        &cfg,
        "--seed",
        "5",
        "--cases",
        "200",
        "--patches",
        "2",
    ]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("equilibrium: cases=200"));
}
