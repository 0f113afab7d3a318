use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_parity-bell"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn algebra_check_passes() {
    let out = run(&["algebra-check", "--dim", "8"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["pass"], true);
    assert!(v["max_residual"].as_f64().unwrap() < 1e-12);
}

#[test]
fn paradox_reports_no_local_model() {
    let out = run(&["paradox", "--modes", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["satisfiable"], false);
    assert_eq!(v["assignments_checked"], 64);
}

#[test]
fn chsh_ghz3_reaches_quantum_bound() {
    let out = run(&[
        "chsh",
        "--state",
        "ghz",
        "--modes",
        "3",
        "--dim",
        "8",
        "--optimize",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!((v["abs_value"].as_f64().unwrap() - 4.0).abs() < 1e-6);
    assert_eq!(v["quantum_bound"].as_f64().unwrap(), 4.0);
    assert_eq!(v["local_bound"].as_f64().unwrap(), 2.0);
    assert_eq!(v["settings"].as_array().unwrap().len(), 6);
}

#[test]
fn chsh_with_settings_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("settings.json");
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let settings = serde_json::json!([[1, 0, 0], [0, 1, 0], [h, -h, 0], [h, h, 0]]);
    fs::write(&path, settings.to_string()).unwrap();
    let out = run(&[
        "chsh",
        "--state",
        "ghz",
        "--modes",
        "2",
        "--dim",
        "4",
        "--settings-file",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!((v["abs_value"].as_f64().unwrap() - 2.0 * 2f64.sqrt()).abs() < 1e-12);
}

#[test]
fn output_is_deterministic() {
    let args = [
        "chsh",
        "--state",
        "nopa",
        "--r",
        "0.7",
        "--dim",
        "16",
        "--optimize",
        "--seed",
        "9",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn sweep_csv_rows_are_monotone() {
    let out = run(&[
        "sweep", "--state", "nopa", "--r-min", "0.1", "--r-max", "0.9", "--steps", "10", "--dim",
        "32", "--format", "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "r,chsh_value,closed_form,abs_error,truncation_deficit"
    );
    let rs: Vec<f64> = lines
        .map(|l| l.split(',').next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(rs.len(), 10);
    assert!(rs.windows(2).all(|w| w[1] > w[0]));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(run(&["algebra-check", "--bogus"]).status.code(), Some(2));
    assert_eq!(run(&["algebra-check", "--dim", "3"]).status.code(), Some(2));
    assert_eq!(run(&["chsh", "--state", "ghz"]).status.code(), Some(2));
    assert_eq!(
        run(&["chsh", "--state", "bell", "--optimize"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn failed_check_exits_one() {
    // two Fock levels cannot carry the squeezed state
    let out = run(&["sweep", "--dim", "2", "--steps", "3"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["pass"], false);
}

#[test]
fn config_file_supplies_defaults_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.cfg");
    fs::write(
        &path,
        "# ghz run\nmodes = 2\ndim = 4\noptimize = true\nr_min = 0.3\n",
    )
    .unwrap();
    let cfg = path.to_str().unwrap();

    let v = json(&run(&["chsh", "--config", cfg]));
    assert_eq!(v["modes"], 2);
    assert_eq!(v["dim"], 4);

    let v = json(&run(&["chsh", "--config", cfg, "--dim", "6"]));
    assert_eq!(v["dim"], 6);

    fs::write(&path, "dimension = 4\n").unwrap();
    assert_eq!(run(&["paradox", "--config", cfg]).status.code(), Some(2));
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("gap.json");
    let out = run(&[
        "mermin-gap",
        "--modes",
        "4",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["lhv_max"].as_f64().unwrap(), 4.0);
    assert_eq!(v["ratio_vs_bound"].as_f64().unwrap(), 2.0);
}
