use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn shortwave(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shortwave"))
        .args(args)
        .env_remove("SHORTWAVE_WORKERS")
        .output()
        .expect("binary runs")
}

fn manifest(dir: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn zero_samples_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let o = shortwave(&["sample", "--samples", "0", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("M must be ≥ 1"));
    assert!(!out.exists());
}

#[test]
fn every_violation_is_listed() {
    let o = shortwave(&["sample", "--samples", "-1", "--delta", "1.5", "--descriptor", "zeta_9", "--bins", "0"]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    for needle in ["M must be ≥ 1", "delta must lie in (0, 1)", "descriptor", "bins must be ≥ 1"] {
        assert!(err.contains(needle), "{needle} missing from {err}");
    }
}

#[test]
fn malformed_config_file_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    std::fs::write(&cfg, r#"{"samples": 10, "sample-count": 3}"#).unwrap();
    let o = shortwave(&["sample", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("sample-count"));
}

#[test]
fn algebra_check_records_minimum_and_bound() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("alg");
    let o = shortwave(&["algebra-check", "--m", "2", "--truncation", "12", "--k", "3", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let m = manifest(&out);
    assert_eq!(m["passed"], true);
    let res = &m["results"]["min_alternating"];
    assert!(res["min_abs"].as_f64().unwrap() >= res["bound"].as_f64().unwrap());
    assert_eq!(m["checks"][0]["name"], "min-alternating-bound");
    assert!(m["advisory"]["ratio"].is_number());
    let kernels = std::fs::read_to_string(out.join("kernels.csv")).unwrap();
    assert!(kernels.starts_with("n,q,r\n"));
    assert!(kernels.contains("\n12,3,2\n"));
    assert!(out.join("diagonal.jsonl").is_file());
}

#[test]
fn sample_outputs_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    let c = dir.path().join("c");
    let base = ["sample", "--x", "1e5", "--delta", "0.05", "--samples", "400", "--seed", "11", "--plot"];
    let run = |out: &Path, workers: &str| {
        let mut args = base.to_vec();
        args.extend(["--workers", workers, "--out", out.to_str().unwrap()]);
        let o = shortwave(&args);
        assert_ne!(o.status.code(), Some(2), "{}", stderr(&o));
    };
    run(&a, "1");
    run(&b, "4");
    let o = shortwave(&["sample", "--config", a.join("manifest.json").to_str().unwrap(), "--out", c.to_str().unwrap()]);
    assert_ne!(o.status.code(), Some(2), "{}", stderr(&o));
    for f in ["samples.csv", "histogram.csv"] {
        let first = std::fs::read(a.join(f)).unwrap();
        assert_eq!(first, std::fs::read(b.join(f)).unwrap(), "{f} differs across worker counts");
        assert_eq!(first, std::fs::read(c.join(f)).unwrap(), "{f} differs on rerun from manifest");
    }
    let text = std::fs::read_to_string(a.join("samples.csv")).unwrap();
    assert!(text.starts_with("i,x,z\n"));
    assert_eq!(text.lines().count(), 401);
    assert!(a.join("plot.gp").is_file());
    let m = manifest(&a);
    assert_eq!(m["config"]["samples"], 400);
    assert_eq!(m["checks"].as_array().unwrap().len(), 5);
    assert_eq!(m["results"]["run"]["M"], 400);
    assert!(std::fs::read_to_string(a.join("summary.txt")).unwrap().contains("delta advisory"));
}

#[test]
fn workers_default_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("w");
    let o = Command::new(env!("CARGO_BIN_EXE_shortwave"))
        .args(["algebra-check", "--truncation", "5", "--k", "2", "--out", out.to_str().unwrap()])
        .env("SHORTWAVE_WORKERS", "3")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(manifest(&out)["config"]["workers"], 3);
}

#[test]
fn short_coefficient_file_names_the_stage() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("tau2.csv");
    let rows: String = [1, 2, 2, 3, 2, 4, 2, 4, 3, 4].iter().enumerate().map(|(i, v)| format!("{},{v}\n", i + 1)).collect();
    std::fs::write(&csv, format!("n,lambda\n{rows}")).unwrap();
    let o = shortwave(&[
        "window-check",
        "--descriptor",
        "tau_2",
        "--coefficients",
        csv.to_str().unwrap(),
        "--truncation",
        "100",
        "--out",
        dir.path().join("w").to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("stage `coefficients`"), "{}", stderr(&o));
}

#[test]
fn small_pipelines_write_their_tables() {
    let dir = tempfile::tempdir().unwrap();
    let p = |name: &str| dir.path().join(name).to_str().unwrap().to_string();

    let o = shortwave(&["variance", "--delta", "0.1", "--out", &p("var")]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let m = manifest(&dir.path().join("var"));
    assert_eq!(m["results"]["variance"]["N_used"], 100_000);
    assert!(dir.path().join("var/tail.csv").is_file());

    let o = shortwave(&[
        "voronoi-check",
        "--x",
        "1e3",
        "--samples",
        "100",
        "--truncation",
        "1000",
        "--comparison-csv",
        "--out",
        &p("vor"),
    ]);
    assert_ne!(o.status.code(), Some(2), "{}", stderr(&o));
    let header = std::fs::read_to_string(dir.path().join("vor/comparison.csv")).unwrap();
    assert!(header.starts_with("x,direct,approx,diff\n"));
    assert_eq!(std::fs::read_to_string(dir.path().join("vor/voronoi.csv")).unwrap().lines().count(), 4);

    let o = shortwave(&[
        "moments",
        "--x",
        "1e4",
        "--samples",
        "200",
        "--truncation",
        "200",
        "--k-max",
        "4",
        "--out",
        &p("mom"),
    ]);
    assert_ne!(o.status.code(), Some(2), "{}", stderr(&o));
    let m = manifest(&dir.path().join("mom"));
    let diag = m["checks"].as_array().unwrap().iter().find(|c| c["name"] == "diagonal-k2").unwrap();
    assert_eq!(diag["passed"], true);
    assert_eq!(std::fs::read_to_string(dir.path().join("mom/moments.csv")).unwrap().lines().count(), 5);

    let o = shortwave(&["window-check", "--x", "1e3", "--k-max", "2", "--out", &p("win")]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));

    let o = shortwave(&["report", "--runs", dir.path().to_str().unwrap(), "--out", &p("report")]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let report = std::fs::read_to_string(dir.path().join("report/report.csv")).unwrap();
    assert_eq!(report.lines().count(), 5);
    for run in ["var", "vor", "mom", "win"] {
        assert!(report.contains(&format!("\n{run},")), "{run} missing from report");
    }
}

#[test]
fn report_needs_a_directory() {
    let o = shortwave(&["report"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("runs"));
}
