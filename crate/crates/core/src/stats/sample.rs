use std::fmt::Write as _;
use std::path::Path;

use log::warn;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::moments::{summarize, Summary};
use super::rng;
use crate::coefficients::{CoefficientTable, Summatory};
use crate::error::{Error, Result};
use crate::lfun::LFunctionDescriptor;
use crate::variance::sigma_sq_asymptotic;
use crate::voronoi::{delta_pair_normalized, DualKernel};

/// How the statistic is evaluated at each sample point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Exact remainders from the summatory oracle.
    Direct,
    /// Truncated dual sum with N terms.
    Dual {
        #[serde(rename = "N")]
        n: usize,
    },
}

/// Evaluation of the heuristic ln(1/delta) / ln X <= 1/4.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeltaAdvisory {
    pub ratio: f64,
    pub threshold: f64,
    pub within: bool,
}

pub const DELTA_ADVISORY_THRESHOLD: f64 = 0.25;

/// ln(1/delta)/ln X against the advisory threshold.
pub fn delta_validity(x_base: f64, delta: f64) -> DeltaAdvisory {
    let ratio = (1.0 / delta).ln() / x_base.ln();
    let within = ratio <= DELTA_ADVISORY_THRESHOLD;
    DeltaAdvisory {
        ratio,
        threshold: DELTA_ADVISORY_THRESHOLD,
        within,
    }
}

/// A Monte-Carlo run of the normalised short-interval statistic.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleRun {
    pub seed: u64,
    pub descriptor_id: String,
    #[serde(rename = "X")]
    pub x_base: f64,
    pub delta: f64,
    #[serde(rename = "M")]
    pub samples: usize,
    pub method: Method,
    pub sigma: f64,
    #[serde(skip_serializing, default)]
    pub x_values: Vec<f64>,
    #[serde(skip_serializing, default)]
    pub z_values: Vec<f64>,
    pub summary: Summary,
    pub advisory: DeltaAdvisory,
}

/// Samples z_i at x_i = X(1 + u_i) with u_i from stream i of `seed`.
///
/// `d` must have a resolved Rankin-Selberg constant; sigma is the square
/// root of the asymptotic variance.
#[allow(clippy::too_many_arguments)]
pub fn sample_uniform(
    d: &LFunctionDescriptor,
    oracle: &Summatory,
    table: Option<&CoefficientTable>,
    x_base: f64,
    delta: f64,
    samples: usize,
    seed: u64,
    method: Method,
) -> Result<SampleRun> {
    if samples == 0 {
        return Err(Error::EmptySample);
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParameter(format!("delta = {delta} outside (0, 1)")));
    }
    if !(x_base > 0.0) {
        return Err(Error::InvalidParameter(format!("X = {x_base} must be positive")));
    }
    let advisory = delta_validity(x_base, delta);
    if !advisory.within {
        warn!(
            "ln(1/delta)/ln X = {:.4} exceeds {DELTA_ADVISORY_THRESHOLD}; delta may be too small for X = {x_base}",
            advisory.ratio
        );
    }
    let sigma = sigma_sq_asymptotic(d, delta)?.sqrt();
    let xs = rng::uniform_points(seed, x_base, samples);
    let z_values: Vec<f64> = match method {
        Method::Direct => {
            let need = (2.0 * x_base + delta).powi(d.m as i32);
            if need > oracle.limit() {
                return Err(Error::OutOfRange {
                    t: need,
                    limit: oracle.limit(),
                });
            }
            xs.par_iter()
                .map(|&x| delta_pair_normalized(d, oracle, x, delta, sigma))
                .collect::<Result<_>>()?
        }
        Method::Dual { n } => {
            let table = table.ok_or_else(|| Error::InvalidParameter("dual method needs a coefficient table".into()))?;
            let kernel = DualKernel::new(d, table, n)?;
            xs.par_iter().map(|&x| kernel.delta_approx(x, delta) / sigma).collect()
        }
    };
    let summary = summarize(&z_values)?;
    Ok(SampleRun {
        seed,
        descriptor_id: d.id.clone(),
        x_base,
        delta,
        samples,
        method,
        sigma,
        x_values: xs,
        z_values,
        summary,
        advisory,
    })
}

/// Runs `f` on a dedicated pool of `workers` threads (0 = machine parallelism).
pub fn with_workers<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}

#[derive(Serialize)]
struct SampleRow {
    i: usize,
    x: f64,
    z: f64,
}

/// Writes the run as CSV with columns i, x, z.
pub fn write_samples_csv(run: &SampleRun, path: impl AsRef<Path>) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for (i, (&x, &z)) in run.x_values.iter().zip(&run.z_values).enumerate() {
        w.serialize(SampleRow { i, x, z })?;
    }
    w.flush()?;
    Ok(())
}

/// Writes everything but the sample arrays as pretty JSON.
pub fn write_summary_json(run: &SampleRun, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, serde_json::to_string_pretty(run)? + "\n")?;
    Ok(())
}

/// Equal-width histogram; values outside [lo, hi) are counted separately.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
    pub below: u64,
    pub above: u64,
}

pub fn histogram(z: &[f64], bins: usize, lo: f64, hi: f64) -> Result<Histogram> {
    if bins == 0 || !(hi > lo) {
        return Err(Error::InvalidParameter(format!("histogram needs bins >= 1 and hi > lo, got {bins}, [{lo}, {hi})")));
    }
    let width = (hi - lo) / bins as f64;
    let edges = (0..=bins).map(|i| lo + i as f64 * width).collect();
    let mut counts = vec![0u64; bins];
    let (mut below, mut above) = (0, 0);
    for &v in z {
        if v < lo {
            below += 1;
        } else if v >= hi {
            above += 1;
        } else {
            counts[(((v - lo) / width) as usize).min(bins - 1)] += 1;
        }
    }
    Ok(Histogram {
        edges,
        counts,
        below,
        above,
    })
}

/// Writes bin_lo, bin_hi, count, density (normalised by the total sample).
pub fn write_histogram_csv(h: &Histogram, path: impl AsRef<Path>) -> Result<()> {
    let total: u64 = h.counts.iter().sum::<u64>() + h.below + h.above;
    let mut out = String::from("bin_lo,bin_hi,count,density\n");
    for (i, &c) in h.counts.iter().enumerate() {
        let (a, b) = (h.edges[i], h.edges[i + 1]);
        let density = if total > 0 { c as f64 / (total as f64 * (b - a)) } else { 0.0 };
        writeln!(out, "{a},{b},{c},{density}").expect("string write");
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// A gnuplot script overlaying the histogram CSV with the standard normal density.
pub fn write_plot_script(histogram_csv: &str, path: impl AsRef<Path>) -> Result<()> {
    let script = format!(
        "set datafile separator ','\n\
         set key top right\n\
         set xlabel 'z'\n\
         set ylabel 'density'\n\
         phi(x) = exp(-x*x/2) / sqrt(2*pi)\n\
         plot '{histogram_csv}' every ::1 using (($1+$2)/2):4 with boxes title 'samples', \\\n     phi(x) with lines lw 2 title 'N(0,1)'\n"
    );
    std::fs::write(path, script)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::sieve_gaussian_ideals;
    use crate::lfun::{builtin_descriptor, Builtin};

    fn gauss() -> LFunctionDescriptor {
        builtin_descriptor(Builtin::GaussianIdeals).unwrap()
    }

    const ORACLE: Summatory = Summatory::Gaussian { denominator: 4 };

    #[test]
    fn empty_run_rejected() {
        let err = sample_uniform(&gauss(), &ORACLE, None, 1e3, 0.1, 0, 1, Method::Direct).unwrap_err();
        assert_eq!(err.to_string(), "empty sample");
    }

    #[test]
    fn deterministic_across_worker_counts() {
        let g = gauss();
        let runs: Vec<SampleRun> = [1, 4, 16]
            .iter()
            .map(|&w| with_workers(w, || sample_uniform(&g, &ORACLE, None, 1e4, 0.05, 300, 9, Method::Direct)).unwrap().unwrap())
            .collect();
        for r in &runs[1..] {
            assert_eq!(
                r.z_values.iter().map(|v| v.to_bits()).collect::<Vec<_>>(),
                runs[0].z_values.iter().map(|v| v.to_bits()).collect::<Vec<_>>()
            );
            assert_eq!(r.summary, runs[0].summary);
        }
    }

    #[test]
    fn dual_method_close_to_direct() {
        let g = gauss();
        let table = sieve_gaussian_ideals(20_000).unwrap();
        let a = sample_uniform(&g, &ORACLE, Some(&table), 1e4, 0.05, 200, 3, Method::Direct).unwrap();
        let b = sample_uniform(&g, &ORACLE, Some(&table), 1e4, 0.05, 200, 3, Method::Dual { n: 20_000 }).unwrap();
        assert_eq!(a.x_values, b.x_values);
        let mse: f64 = a.z_values.iter().zip(&b.z_values).map(|(p, q)| (p - q).powi(2)).sum::<f64>() / 200.0;
        assert!(mse < 0.1, "{mse}");
    }

    #[test]
    fn outputs_round_trip() {
        let g = gauss();
        let run = sample_uniform(&g, &ORACLE, None, 1e3, 0.1, 50, 5, Method::Direct).unwrap();
        let dir = tempfile::tempdir().unwrap();
        write_samples_csv(&run, dir.path().join("s.csv")).unwrap();
        let text = std::fs::read_to_string(dir.path().join("s.csv")).unwrap();
        assert!(text.starts_with("i,x,z\n0,"));
        assert_eq!(text.lines().count(), 51);
        write_summary_json(&run, dir.path().join("s.json")).unwrap();
        let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("s.json")).unwrap()).unwrap();
        assert_eq!(v["M"], 50);
        assert_eq!(v["method"], "direct");
        assert!(v.get("z_values").is_none());
        let h = histogram(&run.z_values, 10, -4.0, 4.0).unwrap();
        assert_eq!(h.counts.iter().sum::<u64>() + h.below + h.above, 50);
        write_histogram_csv(&h, dir.path().join("h.csv")).unwrap();
        write_plot_script("h.csv", dir.path().join("plot.gp")).unwrap();
        assert!(std::fs::read_to_string(dir.path().join("plot.gp")).unwrap().contains("'h.csv'"));
    }

    #[test]
    fn method_serialisation() {
        assert_eq!(serde_json::to_string(&Method::Direct).unwrap(), "\"direct\"");
        assert_eq!(serde_json::to_string(&Method::Dual { n: 7 }).unwrap(), "{\"dual\":{\"N\":7}}");
    }

    #[test]
    fn advisory_threshold() {
        assert!(delta_validity(1e8, 0.02).within);
        assert!(!delta_validity(1e3, 1e-4).within);
    }
}
