use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_nematic-colloid");

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(BIN)
        .arg("--out")
        .arg(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn limit_reports_critical_values_and_landscapes() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["limit", "--beta", "0.5,2"]);
    assert_eq!(out.status.code(), Some(0));
    let summary = json(&dir.path().join("summary.json"));
    assert!((summary["beta_equal"].as_f64().unwrap() - 1.409071).abs() < 1e-6);
    assert!((summary["beta_spinodal"].as_f64().unwrap() - 2.818142).abs() < 1e-6);
    let csv = fs::read_to_string(dir.path().join("landscape_beta_0.5.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("theta_d,energy"));
    assert_eq!(csv.lines().count(), 722);
    assert!(dir.path().join("landscape_beta_2.csv").exists());
}

#[test]
fn limit_sweep_writes_hysteresis_trace() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["limit", "--sweep", "0:3.5:350", "--branch", "sr"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(dir.path().join("hysteresis.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("beta,theta_d,energy,branch"));
    let jumps = &json(&dir.path().join("summary.json"))["sweep"]["jumps"];
    assert_eq!(jumps.as_array().unwrap().len(), 1);
    assert!((jumps[0]["beta"].as_f64().unwrap() - 2.82).abs() < 0.011);
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(dir.path(), &["limit"]).status.code(), Some(2));
    assert_eq!(run(dir.path(), &["limit", "--beta", "-1"]).status.code(), Some(2));
    assert_eq!(run(dir.path(), &["limit", "--sweep", "0:1"]).status.code(), Some(2));
    assert_eq!(run(dir.path(), &["profile", "--theta", "4"]).status.code(), Some(2));
    let cfg = dir.path().join("bad.toml");
    fs::write(&cfg, "[regime]\nbeta = 1.0\nunknown = 3\n").unwrap();
    assert_eq!(run(dir.path(), &["minimize", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
    fs::write(&cfg, "this is not toml [").unwrap();
    assert_eq!(run(dir.path(), &["seed", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn profile_matches_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["profile", "--theta", "1.5708", "--s-star", "1.5"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&dir.path().join("profile.json"));
    assert!(v["abs_error"].as_f64().unwrap() <= 1e-6);
    let out = run(dir.path(), &["profile", "--theta", "0"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(json(&dir.path().join("profile.json"))["quadrature"].as_f64().unwrap().abs() < 1e-12);
}

#[test]
fn check_suite_passes_and_detects_faults() {
    let dir = tempfile::tempdir().unwrap();
    let ok = run(dir.path(), &["check", "--only", "qtensor,limit"]);
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stdout));
    let bad = run(dir.path(), &["check", "--only", "qtensor", "--inject-fault"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stdout).contains("FAIL"));
}

const SMALL_RUN: &str = r#"
[regime]
beta = 0.3333333333333333
eta = 0.25

[mesh]
r_max = 3.0
n_r = 32
n_theta = 24
stretch = 1.03

[seed]
type = "saturn"

[solver]
max_iter = 20000
"#;

#[test]
fn seed_and_minimize_are_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let cfg = a.path().join("run.toml");
    fs::write(&cfg, SMALL_RUN).unwrap();
    let cfg = cfg.to_str().unwrap();
    for dir in [a.path(), b.path()] {
        assert_eq!(run(dir, &["seed", "--config", cfg]).status.code(), Some(0));
        let out = run(dir, &["minimize", "--config", cfg]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    }
    for name in ["seed.csv", "field.csv", "energy.json", "trace.csv", "defects.json", "phi.csv"] {
        let x = fs::read(a.path().join(name)).unwrap();
        let y = fs::read(b.path().join(name)).unwrap();
        assert!(x == y, "{name} differs between identical runs");
    }
    let e = json(&a.path().join("energy.json"));
    assert!(e["report"]["final_energy"].as_f64().unwrap() < e["report"]["initial_energy"].as_f64().unwrap());

    let field = a.path().join("field.csv");
    let c = tempfile::tempdir().unwrap();
    let out = run(c.path(), &["analyze", "--field", field.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(fs::read(c.path().join("defects.json")).unwrap(), fs::read(a.path().join("defects.json")).unwrap());
}
