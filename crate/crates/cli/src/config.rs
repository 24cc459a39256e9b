//! Experiment configuration: a JSON document overlaid by command-line flags.

use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use shortwave_core::lfun::Builtin;
use shortwave_core::stats::MAX_POWER;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Sample,
    VoronoiCheck,
    Variance,
    Moments,
    AlgebraCheck,
    WindowCheck,
    Report,
    Suite,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Sample => "sample",
            Kind::VoronoiCheck => "voronoi-check",
            Kind::Variance => "variance",
            Kind::Moments => "moments",
            Kind::AlgebraCheck => "algebra-check",
            Kind::WindowCheck => "window-check",
            Kind::Report => "report",
            Kind::Suite => "suite",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum MethodName {
    Direct,
    Dual,
}

/// Pass thresholds for the Gaussian-limit checks. Engineering choices,
/// adjustable per run.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", default, deny_unknown_fields)]
pub struct Thresholds {
    pub mean: f64,
    pub variance: f64,
    pub skewness: f64,
    pub kurtosis: f64,
    pub ks: f64,
    /// Allowed |m_k - mu_k| in jackknife standard errors.
    pub moment_se: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            mean: 0.05,
            variance: 0.15,
            skewness: 0.15,
            kurtosis: 0.5,
            ks: 0.03,
            moment_se: 4.0,
        }
    }
}

/// Settings as read from a file or flags; every field optional.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize, clap::Args)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct RawConfig {
    /// Kind stored in a config file; the positional kind wins.
    #[arg(skip)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kind: Option<Kind>,
    /// Built-in name (tau_2, gaussian_ideals, ramanujan, ...) or a descriptor JSON file
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub descriptor: Option<String>,
    /// Coefficient CSV (`n,lambda`) used instead of the built-in sieve
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coefficients: Option<PathBuf>,
    /// Base point X; samples are drawn from [X, 2X]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x: Option<f64>,
    /// Interval length delta in (0, 1)
    #[arg(long, allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    /// Sample count M
    #[arg(long, allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<i64>,
    /// Dual-sum truncation N (largest index for algebra-check)
    #[arg(long, allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub truncation: Option<i64>,
    /// Random seed; sample i always uses stream i of this seed
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Highest moment or window power
    #[arg(long, allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_max: Option<i64>,
    /// Tuple length for algebra-check
    #[arg(long, allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<i64>,
    /// Root degree for algebra-check (defaults to the descriptor degree)
    #[arg(long, allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<i64>,
    /// Sampling method for sample and moments
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<MethodName>,
    /// Histogram bin count
    #[arg(long, allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bins: Option<i64>,
    /// Also write a gnuplot script for the histogram
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub plot: Option<bool>,
    /// Write per-sample x, direct, approx, diff rows in voronoi-check
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub comparison_csv: Option<bool>,
    /// Tuple budget for exhaustive enumerations
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub budget: Option<u64>,
    /// Directory of prior runs for report
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runs: Option<PathBuf>,
    /// Output directory
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    /// Worker threads (0 = machine parallelism, 1 = sequential)
    #[arg(long, env = "SHORTWAVE_WORKERS")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
    #[arg(skip)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub thresholds: Option<Thresholds>,
}

impl RawConfig {
    /// Reads a config file. A prior run's manifest is accepted too; its
    /// `config` object is used.
    pub fn from_file(path: &Path) -> Result<Self, Vec<String>> {
        let text = std::fs::read_to_string(path).map_err(|e| vec![format!("config: cannot read {}: {e}", path.display())])?;
        let mut value: Value =
            serde_json::from_str(&text).map_err(|e| vec![format!("config: {} is not valid JSON: {e}", path.display())])?;
        if let Some(inner) = value.get("config").filter(|_| value.get("tool").is_some()) {
            value = inner.clone();
        }
        serde_json::from_value(value).map_err(|e| vec![format!("config: {e}")])
    }

    /// `self` with every field set in `over` replaced.
    pub fn overlay(&self, over: &RawConfig) -> RawConfig {
        let mut base = to_map(self);
        for (k, v) in to_map(over) {
            if !v.is_null() {
                base.insert(k, v);
            }
        }
        serde_json::from_value(Value::Object(base)).expect("overlay of two valid configs")
    }
}

fn to_map(c: &RawConfig) -> Map<String, Value> {
    match serde_json::to_value(c).expect("config serialises") {
        Value::Object(m) => m,
        _ => unreachable!(),
    }
}

/// Where the L-function comes from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DescriptorSource {
    Builtin(String),
    File(PathBuf),
}

/// Validated settings with per-kind defaults filled in.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct ExperimentConfig {
    pub kind: Kind,
    pub descriptor: String,
    pub coefficients: Option<PathBuf>,
    pub x: f64,
    pub delta: f64,
    pub samples: usize,
    pub truncation: Option<usize>,
    pub seed: u64,
    pub k_max: u32,
    pub k: usize,
    pub m: Option<u32>,
    pub method: MethodName,
    pub bins: usize,
    pub plot: bool,
    pub comparison_csv: bool,
    pub budget: u64,
    pub runs: Option<PathBuf>,
    pub out: PathBuf,
    pub workers: usize,
    pub thresholds: Thresholds,
}

struct Defaults {
    x: f64,
    delta: f64,
    samples: i64,
    truncation: Option<i64>,
    k_max: i64,
}

fn defaults(kind: Kind) -> Defaults {
    let base = Defaults {
        x: 1e6,
        delta: 0.02,
        samples: 5000,
        truncation: None,
        k_max: 6,
    };
    match kind {
        Kind::Sample | Kind::Moments => Defaults {
            truncation: Some(10_000),
            ..base
        },
        Kind::VoronoiCheck => Defaults {
            x: 1e5,
            delta: 0.05,
            samples: 500,
            truncation: Some(10_000),
            ..base
        },
        Kind::AlgebraCheck => Defaults {
            truncation: Some(12),
            ..base
        },
        Kind::WindowCheck => Defaults {
            x: 1e4,
            delta: 0.1,
            truncation: Some(100),
            k_max: 4,
            ..base
        },
        Kind::Variance | Kind::Report | Kind::Suite => base,
    }
}

impl ExperimentConfig {
    /// Validates `raw`, reporting every violated field at once.
    pub fn resolve(kind: Kind, raw: &RawConfig) -> Result<Self, Vec<String>> {
        let def = defaults(kind);
        let mut errs = Vec::new();

        let descriptor = raw.descriptor.clone().unwrap_or_else(|| "gaussian_ideals".into());
        match descriptor_source(&descriptor) {
            Ok(DescriptorSource::File(_)) if raw.coefficients.is_none() => {
                errs.push("coefficients must be given with a descriptor file".into())
            }
            Ok(_) => {}
            Err(e) => errs.push(e),
        }
        if let Some(p) = &raw.coefficients {
            if !p.is_file() {
                errs.push(format!("coefficients file {} does not exist", p.display()));
            }
        }

        let x = raw.x.unwrap_or(def.x);
        if !(x.is_finite() && x > 1.0) {
            errs.push(format!("X must be > 1, got {x}"));
        }
        let delta = raw.delta.unwrap_or(def.delta);
        if !(delta > 0.0 && delta < 1.0) {
            errs.push(format!("delta must lie in (0, 1), got {delta}"));
        }
        let samples = raw.samples.unwrap_or(def.samples);
        if samples < 1 {
            errs.push("M must be ≥ 1".into());
        }
        let truncation = raw.truncation.or(def.truncation);
        if let Some(n) = truncation {
            if n < 1 {
                errs.push("N must be ≥ 1".into());
            }
        }
        let k_max = raw.k_max.unwrap_or(def.k_max);
        if k_max < 1 {
            errs.push("k-max must be ≥ 1".into());
        } else if kind == Kind::WindowCheck && k_max > MAX_POWER as i64 {
            errs.push(format!("k-max must be ≤ {MAX_POWER} for window-check"));
        } else if k_max > 12 {
            errs.push("k-max must be ≤ 12".into());
        }
        let k = raw.k.unwrap_or(3);
        if !(1..=8).contains(&k) {
            errs.push("k must lie in 1..=8".into());
        }
        if let Some(m) = raw.m {
            if !(2..=8).contains(&m) {
                errs.push("m must lie in 2..=8".into());
            }
        }
        let bins = raw.bins.unwrap_or(40);
        if bins < 1 {
            errs.push("bins must be ≥ 1".into());
        }
        let budget = raw.budget.unwrap_or(shortwave_core::algebra::DEFAULT_TUPLE_BUDGET);
        if budget == 0 {
            errs.push("budget must be ≥ 1".into());
        }
        let thresholds = raw.thresholds.unwrap_or_default();
        for (name, v) in [
            ("thresholds.mean", thresholds.mean),
            ("thresholds.variance", thresholds.variance),
            ("thresholds.skewness", thresholds.skewness),
            ("thresholds.kurtosis", thresholds.kurtosis),
            ("thresholds.ks", thresholds.ks),
            ("thresholds.moment-se", thresholds.moment_se),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                errs.push(format!("{name} must be > 0"));
            }
        }
        if kind == Kind::Report {
            match &raw.runs {
                None => errs.push("runs must name a directory for report".into()),
                Some(p) if !p.is_dir() => errs.push(format!("runs directory {} does not exist", p.display())),
                _ => {}
            }
        }
        if !errs.is_empty() {
            return Err(errs);
        }
        Ok(ExperimentConfig {
            kind,
            descriptor,
            coefficients: raw.coefficients.clone(),
            x,
            delta,
            samples: samples as usize,
            truncation: truncation.map(|n| n as usize),
            seed: raw.seed.unwrap_or(42),
            k_max: k_max as u32,
            k: k as usize,
            m: raw.m.map(|m| m as u32),
            method: raw.method.unwrap_or(MethodName::Direct),
            bins: bins as usize,
            plot: raw.plot.unwrap_or(false),
            comparison_csv: raw.comparison_csv.unwrap_or(false),
            budget,
            runs: raw.runs.clone(),
            out: raw.out.clone().unwrap_or_else(|| PathBuf::from(format!("shortwave-{}", kind.name()))),
            workers: raw.workers.unwrap_or(0),
            thresholds,
        })
    }
}

/// A built-in name, or an existing JSON descriptor file.
pub fn descriptor_source(s: &str) -> Result<DescriptorSource, String> {
    match s.parse::<Builtin>() {
        Ok(b) => Ok(DescriptorSource::Builtin(b.id())),
        Err(_) if Path::new(s).is_file() => Ok(DescriptorSource::File(PathBuf::from(s))),
        Err(e) => Err(format!("descriptor: {e}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid_for_every_kind() {
        for kind in [
            Kind::Sample,
            Kind::VoronoiCheck,
            Kind::Variance,
            Kind::Moments,
            Kind::AlgebraCheck,
            Kind::WindowCheck,
            Kind::Suite,
        ] {
            let c = ExperimentConfig::resolve(kind, &RawConfig::default()).unwrap();
            assert_eq!(c.kind, kind);
            assert_eq!(c.descriptor, "gaussian_ideals");
        }
    }

    #[test]
    fn zero_samples_rejected() {
        let raw = RawConfig {
            samples: Some(0),
            ..Default::default()
        };
        let errs = ExperimentConfig::resolve(Kind::Sample, &raw).unwrap_err();
        assert_eq!(errs, vec!["M must be ≥ 1".to_string()]);
    }

    #[test]
    fn every_violation_listed() {
        let raw = RawConfig {
            samples: Some(-3),
            delta: Some(1.5),
            x: Some(0.0),
            descriptor: Some("nonsense".into()),
            truncation: Some(0),
            ..Default::default()
        };
        let errs = ExperimentConfig::resolve(Kind::Sample, &raw).unwrap_err();
        assert_eq!(errs.len(), 5, "{errs:?}");
    }

    #[test]
    fn overlay_prefers_flags() {
        let file = RawConfig {
            x: Some(1e3),
            seed: Some(1),
            ..Default::default()
        };
        let flags = RawConfig {
            seed: Some(9),
            ..Default::default()
        };
        let merged = file.overlay(&flags);
        assert_eq!(merged.x, Some(1e3));
        assert_eq!(merged.seed, Some(9));
    }

    #[test]
    fn resolved_config_reads_back() {
        let c = ExperimentConfig::resolve(Kind::Variance, &RawConfig::default()).unwrap();
        let raw: RawConfig = serde_json::from_value(serde_json::to_value(&c).unwrap()).unwrap();
        assert_eq!(ExperimentConfig::resolve(Kind::Variance, &raw).unwrap(), c);
    }

    #[test]
    fn kebab_case_keys() {
        let raw: RawConfig = serde_json::from_str(r#"{"k-max": 4, "comparison-csv": true, "thresholds": {"ks": 0.05}}"#).unwrap();
        assert_eq!(raw.k_max, Some(4));
        assert_eq!(raw.thresholds.unwrap().ks, 0.05);
        assert_eq!(raw.thresholds.unwrap().mean, 0.05);
        assert!(serde_json::from_str::<RawConfig>(r#"{"samples_count": 4}"#).is_err());
    }
}
