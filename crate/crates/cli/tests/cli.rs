use std::path::Path;
use std::process::Command;

use cli::{run, ExperimentConfig, Suite};

fn cfstein(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_cfstein")).args(args).output().expect("binary runs")
}

fn read(p: &Path) -> String {
    std::fs::read_to_string(p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

#[test]
fn levy_fixture_curve() {
    let dir = tempfile::tempdir().unwrap();
    let out = cfstein(&["dawson", "--target", "levy-fixture", "--t-grid", "0:5:0.5", "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = read(&dir.path().join("curves/dawson_levy.csv"));
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("xi,D"));
    let at_one: f64 = lines
        .find_map(|l| l.strip_prefix("1,").map(|v| v.parse().unwrap()))
        .expect("row for xi = 1");
    assert!((at_one - (1.0 - (-1f64).exp())).abs() < 1e-9, "D(1) = {at_one}");
    assert!((at_one - 0.63212).abs() < 1e-5);
}

#[test]
fn records_smoke_run_and_determinism() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        let out = cfstein(&["dickman", "--example", "records", "--n-grid", "50,100,200", "--seed", "3", "--out", d.path().to_str().unwrap()]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let reports: serde_json::Value = serde_json::from_str(&read(&a.path().join("reports.json"))).unwrap();
    let rows = reports.as_array().unwrap();
    assert_eq!(rows.len(), 3);
    for r in rows {
        assert!(r["kol_bound"].as_f64().unwrap() >= r["kol_empirical"].as_f64().unwrap());
        assert!(r["meta"]["slope_kol_bound"].is_number());
    }
    let fits: serde_json::Value = serde_json::from_str(&read(&a.path().join("ratefit.json"))).unwrap();
    assert!(fits["kol_bound"]["slope"].as_f64().unwrap() < 0.0);

    for rel in ["reports.json", "ratefit.json", "curves/cf_diff_n50.csv", "curves/cf_diff_n200.csv"] {
        assert_eq!(read(&a.path().join(rel)), read(&b.path().join(rel)), "{rel} differs between runs");
    }
}

#[test]
fn config_file_with_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "suite = transfer-demo\nn_grid = 10,100,1000\np = 2\n").unwrap();
    let out_dir = dir.path().join("out");
    let out = cfstein(&["transfer-demo", "--config", cfg.to_str().unwrap(), "--n-grid", "100,1000,10000,100000", "--out", out_dir.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let reports: serde_json::Value = serde_json::from_str(&read(&out_dir.join("reports.json"))).unwrap();
    assert_eq!(reports.as_array().unwrap().len(), 4);
    assert_eq!(reports[0]["w_order"], 3);
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = cfstein(&["dickman", "--n-grid", "200,100", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err: serde_json::Value = serde_json::from_str(&read(&dir.path().join("error.json"))).unwrap();
    assert_eq!(err["kind"], "usage");
    assert_eq!(err["field"], "n_grid");

    let out = cfstein(&["dickman", "--example", "trees", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(cfstein(&["no-such-suite"]).status.code(), Some(2));
}

#[test]
fn numeric_failure_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    // α = 2 is outside the stable family
    let out = cfstein(&["stable", "--alpha", "2", "--n-grid", "10,100,1000", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let err: serde_json::Value = serde_json::from_str(&read(&dir.path().join("error.json"))).unwrap();
    assert_eq!(err["kind"], "domain");
}

#[test]
fn library_run_writes_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = ExperimentConfig::new(Suite::Chaos, dir.path());
    cfg.n_grid = Some(vec![10, 100, 1000]);
    cfg.reps = Some(20_000);
    cfg.seed = 5;
    let out = run(&cfg).unwrap();
    assert_eq!(out.reports.len(), 3);
    assert!(out.fits["delta_n"].slope < 0.0);
    assert!(dir.path().join("curves/cf_diff_n1000.csv").exists());
}
