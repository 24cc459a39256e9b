//! Batch runner for the shortwave experiments: configuration, one pipeline
//! per experiment kind, and manifests that make every run reproducible.

pub mod checks;
pub mod config;
pub mod pipelines;
pub mod suite;

use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use shortwave_core::stats::{delta_validity, with_workers, DeltaAdvisory};

use checks::Check;
use config::{ExperimentConfig, Kind};

/// A runtime failure and the stage it happened in.
#[derive(Debug)]
pub struct StageError {
    pub stage: &'static str,
    pub error: anyhow::Error,
}

impl std::fmt::Display for StageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "stage `{}` failed: {:#}", self.stage, self.error)
    }
}

impl std::error::Error for StageError {}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub core_version: String,
    pub kind: Kind,
    pub config: ExperimentConfig,
    pub wall_time_seconds: f64,
    pub advisory: DeltaAdvisory,
    pub checks: Vec<Check>,
    pub passed: bool,
    pub artifacts: Vec<String>,
    pub results: Value,
}

/// Runs one experiment, writing manifest.json, summary.txt and the kind's
/// data files into `cfg.out`.
pub fn run(cfg: &ExperimentConfig) -> Result<Manifest, StageError> {
    let start = Instant::now();
    let out = cfg.out.as_path();
    std::fs::create_dir_all(out).map_err(|e| StageError {
        stage: "output",
        error: e.into(),
    })?;
    let outcome = with_workers(cfg.workers, || pipelines::run_kind(cfg, out)).map_err(|e| StageError {
        stage: "workers",
        error: e.into(),
    })??;

    let mut artifacts = outcome.artifacts;
    artifacts.push("summary.txt".into());
    artifacts.push("manifest.json".into());
    let manifest = Manifest {
        tool: env!("CARGO_PKG_NAME").into(),
        version: env!("CARGO_PKG_VERSION").into(),
        core_version: shortwave_core::VERSION.into(),
        kind: cfg.kind,
        config: cfg.clone(),
        wall_time_seconds: start.elapsed().as_secs_f64(),
        advisory: delta_validity(cfg.x, cfg.delta),
        passed: outcome.checks.iter().all(|c| c.passed),
        checks: outcome.checks,
        artifacts,
        results: outcome.results,
    };
    write_summary(&manifest, &outcome.summary, out)?;
    let text = serde_json::to_string_pretty(&manifest).expect("manifest serialises") + "\n";
    std::fs::write(out.join("manifest.json"), text).map_err(|e| StageError {
        stage: "output",
        error: e.into(),
    })?;
    Ok(manifest)
}

fn write_summary(m: &Manifest, body: &str, out: &Path) -> Result<(), StageError> {
    let mut text = format!("shortwave {} ({})\n\n{body}", m.kind.name(), m.version);
    if !body.ends_with('\n') {
        text.push('\n');
    }
    text.push_str(&format!(
        "\ndelta advisory: ln(1/delta)/ln X = {:.4} (threshold {}) {}\n",
        m.advisory.ratio,
        m.advisory.threshold,
        if m.advisory.within { "ok" } else { "exceeded" }
    ));
    if !m.checks.is_empty() {
        text.push_str("\nchecks:\n");
        for c in &m.checks {
            text.push_str(&format!("  {:<24} {}  {}\n", c.name, if c.passed { "PASS" } else { "FAIL" }, c.detail));
        }
    }
    std::fs::write(out.join("summary.txt"), text).map_err(|e| StageError {
        stage: "output",
        error: e.into(),
    })
}
