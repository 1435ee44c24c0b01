use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn run(dir: &Path, command: &str, config: &Value, extra: &[&str]) -> Output {
    let path = dir.join("config.json");
    fs::write(&path, serde_json::to_vec_pretty(config).unwrap()).unwrap();
    Command::new(env!("CARGO_BIN_EXE_oscillometer"))
        .arg(command)
        .arg("--config")
        .arg(&path)
        .arg("--out")
        .arg(dir.join("out"))
        .args(extra)
        .output()
        .unwrap()
}

fn report(dir: &Path) -> Value {
    serde_json::from_slice(&fs::read(dir.join("out/report.json")).unwrap()).unwrap()
}

fn bloch_log() -> Value {
    json!({"space": {"space": "bloch"}, "function": {"kind": "builtin", "name": "log_singular"}})
}

#[test]
fn norm_writes_a_tagged_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), "norm", &bloch_log(), &["--seed", "17"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let rep = report(dir.path());
    assert_eq!(rep["space"], "bloch");
    assert_eq!(rep["seed"], 17);
    assert!((rep["value"].as_f64().unwrap() - 2.0).abs() < 1e-3);
    assert_eq!(rep["argmax_param"]["kind"], "point");
}

#[test]
fn distance_writes_report_and_profile() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = json!({"space": {"space": "bmo_circle"}, "function": {"kind": "builtin", "name": "step_half"}});
    let out = run(dir.path(), "distance", &cfg, &[]);
    assert_eq!(out.status.code(), Some(0));
    let csv = fs::read_to_string(dir.path().join("out/profile.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("scale,tail_sup"));
    assert_eq!(lines.count(), 10);
    assert!((report(dir.path())["limsup_estimate"].as_f64().unwrap() - 0.5).abs() < 0.02);
}

#[test]
fn reports_are_deterministic_across_thread_counts() {
    let cfg = json!({
        "space": {"space": "qk", "K": {"name": "power", "exponent": 1}},
        "function": {"kind": "taylor", "coeffs": [[0, 0], [1, 0], [0, 0.5]]}
    });
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    assert!(run(a.path(), "distance", &cfg, &[]).status.success());
    let path = b.path().join("config.json");
    fs::write(&path, serde_json::to_vec(&cfg).unwrap()).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_oscillometer"))
        .env("OSCILLOMETER_THREADS", "1")
        .args(["distance", "--config"])
        .arg(&path)
        .arg("--out")
        .arg(b.path().join("out"))
        .output()
        .unwrap();
    assert!(out.status.success());
    for file in ["report.json", "profile.csv"] {
        assert_eq!(
            fs::read(a.path().join("out").join(file)).unwrap(),
            fs::read(b.path().join("out").join(file)).unwrap(),
            "{file}"
        );
    }
}

#[test]
fn failed_sandwich_exits_four_with_output() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = bloch_log();
    cfg["family"] = json!({"kind": "dilation", "ladder": {"type": "dyadic_r", "levels": 8}});
    let out = run(dir.path(), "distance", &cfg, &[]);
    assert_eq!(out.status.code(), Some(4));
    let rep = report(dir.path());
    assert_eq!(rep["sandwich_ok"], false);
    // adding each approximant's own tail restores the bound
    assert_eq!(rep["triangle_ok"], true);
}

#[test]
fn assumption_check_passes_for_poisson_on_bmo() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = json!({
        "space": {"space": "bmo_circle"},
        "function": {"kind": "builtin", "name": "step_half"},
        "family": {"kind": "poisson_circle", "ladder": {"type": "dyadic_r", "levels": 14}}
    });
    let out = run(dir.path(), "check", &cfg, &[]);
    assert_eq!(out.status.code(), Some(0));
    let rep = report(dir.path());
    assert_eq!(rep["verdict"], "pass");
    assert_eq!(rep["x_distances"].as_array().unwrap().len(), 14);
}

#[test]
fn invariance_check_reports_deviation() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = json!({
        "space": {"space": "qk"},
        "function": {"kind": "builtin", "name": "monomial", "degree": 2},
        "invariance": {"a": [0.3, 0.2]}
    });
    let out = run(dir.path(), "check", &cfg, &[]);
    assert_eq!(out.status.code(), Some(0));
    assert!(report(dir.path())["relative_deviation"].as_f64().unwrap() < 0.02);
}

#[test]
fn lipschitz_endpoint_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = json!({
        "space": {"space": "lip", "alpha": 1.0},
        "function": {"kind": "builtin", "name": "holder_cusp", "alpha": 1.0},
        "family": {"kind": "lip_smooth", "ladder": {"type": "dyadic_t", "levels": 4, "t0": 0.25}}
    });
    let out = run(dir.path(), "check", &cfg, &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("trivial"));
    assert!(!dir.path().join("out/report.json").exists());
}

#[test]
fn malformed_configs_exit_two_without_output() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = bloch_log();
    cfg["unexpected"] = json!(true);
    assert_eq!(run(dir.path(), "norm", &cfg, &[]).status.code(), Some(2));
    let cfg = json!({"space": {"space": "lip", "alpha": 1.5}, "function": {"kind": "builtin", "name": "z"}});
    assert_eq!(run(dir.path(), "norm", &cfg, &[]).status.code(), Some(2));
    assert!(!dir.path().join("out").exists());
    let missing = Command::new(env!("CARGO_BIN_EXE_oscillometer"))
        .args(["norm", "--config", "/nonexistent/config.json"])
        .output()
        .unwrap();
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn numerical_failures_exit_three_without_output() {
    // 64 samples cannot resolve the default shortest arcs
    let dir = tempfile::tempdir().unwrap();
    let cfg = json!({"space": {"space": "bmo_circle"}, "function": {"kind": "builtin", "name": "step_half", "n": 64}});
    let out = run(dir.path(), "distance", &cfg, &[]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(!dir.path().join("out/report.json").exists());
    assert!(!dir.path().join("out/profile.csv").exists());
}

#[test]
fn function_files_resolve_against_the_config() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("f.json"),
        r#"{"kind": "taylor", "coeffs": [[0, 0], [0, 0], [1, 0]]}"#,
    )
    .unwrap();
    let cfg = json!({"space": {"space": "bloch"}, "function": {"kind": "file", "path": "f.json"}});
    let out = run(dir.path(), "norm", &cfg, &[]);
    assert!(out.status.success());
    // (1 − r²) 2r over shells r = 1 − 2^{-k} peaks at r = 1/2
    let v = report(dir.path())["value"].as_f64().unwrap();
    assert!((v - 0.75).abs() < 1e-12, "{v}");
}

#[test]
fn usage_errors_and_help() {
    let help = Command::new(env!("CARGO_BIN_EXE_oscillometer"))
        .arg("--help")
        .output()
        .unwrap();
    assert_eq!(help.status.code(), Some(0));
    let bad = Command::new(env!("CARGO_BIN_EXE_oscillometer"))
        .arg("frobnicate")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
