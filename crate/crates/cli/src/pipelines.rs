//! One pipeline per experiment kind. Each returns its checks, a JSON
//! results block, the files it wrote and a few lines for summary.txt.

use std::fmt::Write as _;
use std::path::Path;

use anyhow::{anyhow, Context};
use serde::Serialize;
use serde_json::{json, Value};
use shortwave_core::algebra::{
    enumerate_diagonal, min_alternating_sum, moment_oracle, powerfree_kernel, write_diagonal_jsonl,
};
use shortwave_core::coefficients::{builtin_table, load_coefficients, CoefficientTable, Summatory};
use shortwave_core::lfun::{builtin_descriptor, Builtin, LFunctionDescriptor, RsConstant};
use shortwave_core::stats::{
    empirical_moments, gaussian_moment, histogram, sample_uniform, window_expectation, write_histogram_csv,
    write_plot_script, write_samples_csv, Method, SampleRun,
};
use shortwave_core::variance::{
    default_truncation, resolve_descriptor, sigma_sq_asymptotic, sigma_sq_truncated, sigma_sq_truncated_streaming,
    tail_bound_check, tail_estimate, variance_report, VarianceReport,
};
use shortwave_core::voronoi::{l2_deviation, phase_diagnostic, write_comparison_csv};

use crate::checks::{clt_checks, moment_checks, Check};
use crate::config::{descriptor_source, DescriptorSource, ExperimentConfig, Kind, MethodName};
use crate::suite;
use crate::StageError;

/// Largest coefficient table a pipeline builds in memory.
pub const TABLE_LIMIT: usize = 50_000_000;
/// Table size used to calibrate a Rankin-Selberg constant from data.
pub const CALIBRATION_SIZE: usize = 1_000_000;
/// Largest truncation for which window-check also evaluates the diagonal value.
const WINDOW_DIAGONAL_LIMIT: usize = 2_000;
/// Largest phase error accepted by voronoi-check, in radians.
pub const PHASE_TOLERANCE: f64 = 0.05;
/// Largest L2 deviation ratio accepted at the top truncation.
pub const L2_TOLERANCE: f64 = 0.1;

#[derive(Debug, Default)]
pub struct Outcome {
    pub checks: Vec<Check>,
    pub results: Value,
    pub artifacts: Vec<String>,
    pub summary: String,
}

trait Stage<T> {
    fn stage(self, name: &'static str) -> Result<T, StageError>;
}

impl<T, E: Into<anyhow::Error>> Stage<T> for Result<T, E> {
    fn stage(self, name: &'static str) -> Result<T, StageError> {
        self.map_err(|e| StageError {
            stage: name,
            error: e.into(),
        })
    }
}

pub fn run_kind(cfg: &ExperimentConfig, out: &Path) -> Result<Outcome, StageError> {
    match cfg.kind {
        Kind::Sample => sample(cfg, out),
        Kind::VoronoiCheck => voronoi_check(cfg, out),
        Kind::Variance => variance(cfg, out),
        Kind::Moments => moments(cfg, out),
        Kind::AlgebraCheck => algebra_check(cfg, out),
        Kind::WindowCheck => window_check(cfg, out),
        Kind::Report => report(cfg, out),
        Kind::Suite => run_suite(cfg, out),
    }
}

/// The L-function under study and where its coefficients come from.
struct Subject {
    descriptor: LFunctionDescriptor,
    builtin: Option<Builtin>,
    file_table: Option<CoefficientTable>,
}

impl Subject {
    fn load(cfg: &ExperimentConfig) -> Result<Self, StageError> {
        let (descriptor, builtin) = match descriptor_source(&cfg.descriptor).map_err(|e| anyhow!(e)).stage("descriptor")? {
            DescriptorSource::Builtin(name) => {
                let b: Builtin = name.parse().stage("descriptor")?;
                (builtin_descriptor(b).stage("descriptor")?, Some(b))
            }
            DescriptorSource::File(path) => {
                let text = std::fs::read_to_string(&path).stage("descriptor")?;
                let d: LFunctionDescriptor = serde_json::from_str(&text)
                    .with_context(|| format!("reading {}", path.display()))
                    .stage("descriptor")?;
                (d, None)
            }
        };
        let file_table = match &cfg.coefficients {
            Some(p) => Some(load_coefficients(p, &descriptor.id).stage("coefficients")?),
            None => None,
        };
        Ok(Subject {
            descriptor,
            builtin,
            file_table,
        })
    }

    /// Coefficients through n: the loaded file when given, otherwise a sieve.
    fn table(&self, n: usize) -> Result<CoefficientTable, StageError> {
        if let Some(t) = &self.file_table {
            if t.n_max < n {
                return Err(anyhow!("coefficient file covers n <= {}, need {n}", t.n_max)).stage("coefficients");
            }
            return Ok(t.clone());
        }
        if n > TABLE_LIMIT {
            return Err(anyhow!("a table through {n} exceeds the in-memory limit {TABLE_LIMIT}")).stage("coefficients");
        }
        let b = self.builtin.expect("descriptor files always come with coefficients");
        builtin_table(b, n.max(1)).stage("coefficients")
    }

    /// Descriptor with its Rankin-Selberg constant resolved.
    fn resolved(&self) -> Result<LFunctionDescriptor, StageError> {
        if let RsConstant::Analytic(_) = self.descriptor.rs_c {
            return Ok(self.descriptor.clone());
        }
        let table = match &self.file_table {
            Some(t) => t.clone(),
            None => self.table(CALIBRATION_SIZE)?,
        };
        resolve_descriptor(&self.descriptor, Some(&table)).stage("calibration")
    }

    fn has_closed_form(&self) -> bool {
        matches!(
            self.builtin,
            Some(Builtin::TauK(2) | Builtin::TauK(3) | Builtin::GaussianIdeals | Builtin::GaussianLattice)
        )
    }

    /// Table needed for exact remainders on [X, 2X + delta], if any.
    fn oracle_table(&self, x: f64, delta: f64) -> Result<Option<CoefficientTable>, StageError> {
        if self.has_closed_form() {
            return Ok(None);
        }
        let need = (2.0 * x + delta).powi(self.descriptor.m as i32).ceil();
        if need > usize::MAX as f64 {
            return Err(anyhow!("exact remainders need coefficients through {need:e}")).stage("coefficients");
        }
        self.table(need as usize).map(Some)
    }
}

fn truncation(cfg: &ExperimentConfig) -> usize {
    cfg.truncation.expect("kind has a default truncation")
}

fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<(), StageError> {
    let mut w = csv::Writer::from_path(path).stage("output")?;
    for r in rows {
        w.serialize(r).stage("output")?;
    }
    w.flush().stage("output")
}

fn file_name(path: &Path) -> String {
    path.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

fn draw(cfg: &ExperimentConfig, subject: &Subject) -> Result<SampleRun, StageError> {
    let d = subject.resolved()?;
    let (method, table) = match cfg.method {
        MethodName::Direct => (Method::Direct, subject.oracle_table(cfg.x, cfg.delta)?),
        MethodName::Dual => {
            let n = truncation(cfg);
            (Method::Dual { n }, Some(subject.table(n)?))
        }
    };
    let oracle = if subject.has_closed_form() {
        Summatory::for_descriptor(&d, None).stage("oracle")?
    } else {
        Summatory::Table(table.as_ref().expect("a table is loaded when no closed form exists"))
    };
    sample_uniform(&d, &oracle, table.as_ref(), cfg.x, cfg.delta, cfg.samples, cfg.seed, method).stage("sample")
}

fn write_sample_outputs(cfg: &ExperimentConfig, run: &SampleRun, out: &Path, o: &mut Outcome) -> Result<(), StageError> {
    let samples = out.join("samples.csv");
    write_samples_csv(run, &samples).stage("output")?;
    let h = histogram(&run.z_values, cfg.bins, -5.0, 5.0).stage("output")?;
    let hist = out.join("histogram.csv");
    write_histogram_csv(&h, &hist).stage("output")?;
    o.artifacts.push(file_name(&samples));
    o.artifacts.push(file_name(&hist));
    if cfg.plot {
        let plot = out.join("plot.gp");
        write_plot_script("histogram.csv", &plot).stage("output")?;
        o.artifacts.push(file_name(&plot));
    }
    let s = &run.summary;
    writeln!(
        o.summary,
        "{} X={} delta={} M={} seed={} sigma={:.6e}\nmean {:.5}  variance {:.5}  skewness {:.5}  kurtosis {:.5}  KS {:.5} (p = {:.4})",
        run.descriptor_id, run.x_base, run.delta, run.samples, run.seed, run.sigma, s.mean, s.variance, s.skewness, s.kurtosis, s.ks, s.ks_p_value
    )
    .expect("string write");
    Ok(())
}

fn sample(cfg: &ExperimentConfig, out: &Path) -> Result<Outcome, StageError> {
    let subject = Subject::load(cfg)?;
    let run = draw(cfg, &subject)?;
    let mut o = Outcome::default();
    write_sample_outputs(cfg, &run, out, &mut o)?;
    o.checks = clt_checks(&run.summary, &cfg.thresholds, run.samples);
    o.results = json!({ "run": run });
    Ok(o)
}

#[derive(Serialize)]
struct L2Row {
    #[serde(rename = "N")]
    n: usize,
    ratio: f64,
    std_error: f64,
}

fn voronoi_check(cfg: &ExperimentConfig, out: &Path) -> Result<Outcome, StageError> {
    let subject = Subject::load(cfg)?;
    let d = subject.resolved()?;
    let n_top = truncation(cfg);
    let mut ns: Vec<usize> = [n_top / 100, n_top / 10, n_top].into_iter().filter(|&n| n >= 1).collect();
    ns.dedup();
    let table = subject.table(n_top)?;
    let oracle_table = subject.oracle_table(cfg.x, cfg.delta)?;
    let oracle = match &oracle_table {
        Some(t) => Summatory::Table(t),
        None => Summatory::for_descriptor(&d, None).stage("oracle")?,
    };
    let phase = phase_diagnostic(&d, &oracle, &table, cfg.x, cfg.samples, n_top, cfg.seed).stage("phase")?;
    let sigma_sq = sigma_sq_asymptotic(&d, cfg.delta).stage("variance")?;
    let mut l2 = Vec::new();
    for &n in &ns {
        l2.push(l2_deviation(&d, &oracle, &table, cfg.x, cfg.delta, n, cfg.samples, cfg.seed, sigma_sq).stage("l2")?);
    }

    let mut o = Outcome::default();
    let rows: Vec<L2Row> = l2
        .iter()
        .map(|r| L2Row {
            n: r.n,
            ratio: r.ratio,
            std_error: r.std_error,
        })
        .collect();
    let path = out.join("voronoi.csv");
    write_csv(&path, &rows)?;
    o.artifacts.push(file_name(&path));
    if cfg.comparison_csv {
        let path = out.join("comparison.csv");
        write_comparison_csv(&l2.last().expect("at least one truncation").samples, &path).stage("output")?;
        o.artifacts.push(file_name(&path));
        let path = out.join("phase.csv");
        write_comparison_csv(&phase.samples, &path).stage("output")?;
        o.artifacts.push(file_name(&path));
    }

    let mut phase_check = Check::at_most("phase", phase.phase_error, PHASE_TOLERANCE);
    phase_check.detail = format!("phi_hat = {:.5}, phi = {:.5}", phase.phi_hat, phase.phi_expected);
    o.checks.push(phase_check);
    let top = l2.last().expect("at least one truncation");
    o.checks.push(Check::at_most("l2-ratio", top.ratio, L2_TOLERANCE));
    let monotone = l2.windows(2).all(|w| w[1].ratio <= w[0].ratio + 2.0 * w[0].std_error.hypot(w[1].std_error));
    o.checks.push(Check::flag("l2-monotone", monotone, "ratio non-increasing in N within 2 SE"));

    writeln!(
        o.summary,
        "{} X={} delta={} M={}\nphase: phi_hat {:.5} (expected {:.5}), amplitude ratio {:.4}, residual ratio {:.4}",
        d.id, cfg.x, cfg.delta, cfg.samples, phase.phi_hat, phase.phi_expected, phase.amplitude_ratio, phase.residual_ratio
    )
    .expect("string write");
    for r in &rows {
        writeln!(o.summary, "N = {:>10}  L2 ratio {:.5} +- {:.5}", r.n, r.ratio, r.std_error).expect("string write");
    }
    o.results = json!({ "phase": phase, "l2": l2, "sigma_sq": sigma_sq });
    Ok(o)
}

fn variance(cfg: &ExperimentConfig, out: &Path) -> Result<Outcome, StageError> {
    let subject = Subject::load(cfg)?;
    let d = subject.resolved()?;
    let n = cfg
        .truncation
        .unwrap_or_else(|| default_truncation(d.m, cfg.delta).min(usize::MAX as u64) as usize);
    let mut o = Outcome::default();

    let report = if n <= TABLE_LIMIT || subject.file_table.is_some() {
        let table = subject.table(n)?;
        variance_report(&d, &table, cfg.delta, n).stage("variance")?
    } else {
        let b = subject.builtin.expect("no file table means a built-in");
        let (streamed, _) = sigma_sq_truncated_streaming(&d, b, &[(cfg.delta, n as u64)], 1_000_000_000).stage("variance")?;
        let asym = sigma_sq_asymptotic(&d, cfg.delta).stage("variance")?;
        VarianceReport {
            delta: cfg.delta,
            sigma_sq_asymptotic: asym,
            sigma_sq_truncated: streamed[0].value,
            n_used: n,
            tail_bound: tail_estimate(&d, n).stage("variance")?,
            ratio: streamed[0].value / asym,
        }
    };
    let path = out.join("variance.csv");
    write_csv(&path, std::slice::from_ref(&report))?;
    o.artifacts.push(file_name(&path));

    let n_tail = n.min(TABLE_LIMIT);
    let tail_ns: Vec<usize> = [n_tail / 100, n_tail / 10, n_tail].into_iter().filter(|&v| v >= 1).collect();
    let tail_table = subject.table(n_tail)?;
    let tail = tail_bound_check(&d, &tail_table, cfg.delta, &tail_ns).stage("tail")?;
    let path = out.join("tail.csv");
    write_csv(&path, &tail.pairs)?;
    o.artifacts.push(file_name(&path));
    o.checks.push(Check::flag(
        "tail-bound",
        tail.passed,
        format!("C = {:.4e}, slack {}, fitted exponent {:?}", tail.constant, tail.slack, tail.exponent_fit),
    ));

    writeln!(
        o.summary,
        "{} delta={} N={}\nsigma^2 truncated {:.6e}, asymptotic {:.6e}, ratio {:.5}, tail estimate {:.3e}",
        d.id, cfg.delta, n, report.sigma_sq_truncated, report.sigma_sq_asymptotic, report.ratio, report.tail_bound
    )
    .expect("string write");
    o.results = json!({ "variance": report, "tail": tail });
    Ok(o)
}

#[derive(Serialize)]
struct MomentRow {
    k: u32,
    moment: f64,
    standard_error: f64,
    gaussian: f64,
}

#[derive(Serialize)]
struct DiagonalRow {
    k: usize,
    diagonal: f64,
    normalised: f64,
    gaussian: f64,
}

fn moments(cfg: &ExperimentConfig, out: &Path) -> Result<Outcome, StageError> {
    let subject = Subject::load(cfg)?;
    let run = draw(cfg, &subject)?;
    let mut o = Outcome::default();
    write_sample_outputs(cfg, &run, out, &mut o)?;
    let est = empirical_moments(&run.z_values, cfg.k_max).stage("moments")?;
    let rows: Vec<MomentRow> = est
        .iter()
        .map(|e| MomentRow {
            k: e.k,
            moment: e.moment,
            standard_error: e.standard_error,
            gaussian: gaussian_moment(e.k),
        })
        .collect();
    let path = out.join("moments.csv");
    write_csv(&path, &rows)?;
    o.artifacts.push(file_name(&path));

    let d = subject.resolved()?;
    let n = truncation(cfg);
    let table = subject.table(n)?;
    let sigma_sq = sigma_sq_truncated(&d, &table, cfg.delta, n).stage("variance")?;
    let mut diag = Vec::new();
    for k in 1..=cfg.k_max as usize {
        let value = moment_oracle(&d, &table, cfg.delta, n, k).stage("diagonal")?;
        diag.push(DiagonalRow {
            k,
            diagonal: value,
            normalised: value / sigma_sq.powf(k as f64 / 2.0),
            gaussian: gaussian_moment(k as u32),
        });
    }
    let path = out.join("diagonal.csv");
    write_csv(&path, &diag)?;
    o.artifacts.push(file_name(&path));

    if let Some(second) = diag.get(1) {
        let rel = (second.diagonal - sigma_sq).abs() / sigma_sq;
        let mut c = Check::at_most("diagonal-k2", rel, 1e-12);
        c.detail = format!("diagonal {:.15e} vs sigma^2(delta; N) {:.15e}", second.diagonal, sigma_sq);
        o.checks.push(c);
    }
    o.checks.extend(moment_checks(&est, &cfg.thresholds));
    for r in &rows {
        writeln!(o.summary, "k = {}  m_k = {:.5} +- {:.5}  (Gaussian {})", r.k, r.moment, r.standard_error, r.gaussian)
            .expect("string write");
    }
    for r in &diag {
        writeln!(o.summary, "k = {}  diagonal / sigma^k = {:.5}  (Gaussian {})", r.k, r.normalised, r.gaussian)
            .expect("string write");
    }
    o.results = json!({ "run": run, "moments": est, "sigma_sq_truncated": sigma_sq, "N": n });
    Ok(o)
}

#[derive(Serialize)]
struct KernelRow {
    n: u64,
    q: u64,
    r: u64,
}

fn algebra_check(cfg: &ExperimentConfig, out: &Path) -> Result<Outcome, StageError> {
    let m = match cfg.m {
        Some(m) => m,
        None => Subject::load(cfg)?.descriptor.m,
    };
    let n = truncation(cfg) as u64;
    let res = min_alternating_sum(m, n, cfg.k, cfg.budget).stage("enumeration")?;
    let mut o = Outcome::default();

    let kernels: Vec<KernelRow> = (1..=n)
        .map(|v| powerfree_kernel(v, m).map(|kd| KernelRow { n: v, q: kd.q, r: kd.r }))
        .collect::<Result<_, _>>()
        .stage("kernels")?;
    let path = out.join("kernels.csv");
    write_csv(&path, &kernels)?;
    o.artifacts.push(file_name(&path));
    let diag = enumerate_diagonal(m, n, cfg.k, cfg.budget).stage("diagonal")?;
    let path = out.join("diagonal.jsonl");
    write_diagonal_jsonl(&diag, &path).stage("output")?;
    o.artifacts.push(file_name(&path));

    let mut c = Check::flag("min-alternating-bound", res.holds, "");
    c.value = res.min_abs;
    c.threshold = res.bound;
    c.detail = format!(
        "min |sum| = {:.6e} in [{:.6e}, {:.6e}], bound {:.6e}",
        res.min_abs, res.min_abs_lower, res.min_abs_upper, res.bound
    );
    o.checks.push(c);
    writeln!(
        o.summary,
        "m={} N={} k={}: {} tuples, {} exact zeros, {} vanishing decompositions\nmin nonzero |sum| {:.6e} (witness n = {:?}, eps = {:?}), bound {:.6e}",
        m, n, cfg.k, res.tuples_checked, res.exact_zeros, diag.len(), res.min_abs, res.witness_ns, res.witness_eps, res.bound
    )
    .expect("string write");
    o.results = json!({ "min_alternating": res, "diagonal_count": diag.len() });
    Ok(o)
}

#[derive(Serialize)]
struct WindowRow {
    k: u32,
    value: f64,
    error_estimate: f64,
    panels: usize,
    diagonal: Option<f64>,
    gaussian_scaled: f64,
}

fn window_check(cfg: &ExperimentConfig, out: &Path) -> Result<Outcome, StageError> {
    let subject = Subject::load(cfg)?;
    let d = subject.resolved()?;
    let n = truncation(cfg);
    let table = subject.table(n)?;
    let sigma_sq = sigma_sq_truncated(&d, &table, cfg.delta, n).stage("variance")?;
    let sigma = sigma_sq.sqrt();
    let mut rows = Vec::new();
    for k in 1..=cfg.k_max {
        let w = window_expectation(&d, &table, cfg.x, cfg.delta, n, k).stage("quadrature")?;
        let diagonal = if n <= WINDOW_DIAGONAL_LIMIT {
            Some(moment_oracle(&d, &table, cfg.delta, n, k as usize).stage("diagonal")?)
        } else {
            None
        };
        rows.push(WindowRow {
            k,
            value: w.value,
            error_estimate: w.error_estimate,
            panels: w.panels,
            diagonal,
            gaussian_scaled: gaussian_moment(k) * sigma.powi(k as i32),
        });
    }
    let mut o = Outcome::default();
    let path = out.join("window.csv");
    write_csv(&path, &rows)?;
    o.artifacts.push(file_name(&path));

    let mut c = Check::at_most("window-k1", rows[0].value.abs(), 1e-6 * sigma);
    c.detail = format!("|E[Delta]| = {:.3e}, 1e-6 sigma = {:.3e}", rows[0].value.abs(), 1e-6 * sigma);
    o.checks.push(c);
    if let Some(r) = rows.get(1) {
        let mut c = Check::at_most("window-k2", (r.value - sigma_sq).abs(), 1e-3 * sigma_sq);
        c.detail = format!("E[Delta^2] = {:.9e}, sigma^2(delta; N) = {:.9e}", r.value, sigma_sq);
        o.checks.push(c);
    }
    for r in &rows {
        writeln!(
            o.summary,
            "k = {}  E^W = {:.9e}  diagonal = {}  mu_k sigma^k = {:.9e}",
            r.k,
            r.value,
            r.diagonal.map_or("-".to_string(), |v| format!("{v:.9e}")),
            r.gaussian_scaled
        )
        .expect("string write");
    }
    o.results = json!({ "sigma_sq_truncated": sigma_sq, "N": n });
    Ok(o)
}

#[derive(Serialize)]
struct ReportRow {
    run: String,
    kind: String,
    descriptor: String,
    passed: bool,
    checks_passed: usize,
    checks_total: usize,
    wall_time_seconds: f64,
}

fn report(cfg: &ExperimentConfig, out: &Path) -> Result<Outcome, StageError> {
    let runs = cfg.runs.as_ref().expect("validated");
    let mut dirs: Vec<_> = std::fs::read_dir(runs)
        .stage("report")?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.join("manifest.json").is_file())
        .collect();
    dirs.sort();
    let mut rows = Vec::new();
    for dir in &dirs {
        let text = std::fs::read_to_string(dir.join("manifest.json")).stage("report")?;
        let m: Value = match serde_json::from_str(&text) {
            Ok(v) => v,
            Err(e) => {
                log::warn!("skipping {}: {e}", dir.display());
                continue;
            }
        };
        let checks = m["checks"].as_array().cloned().unwrap_or_default();
        rows.push(ReportRow {
            run: file_name(dir),
            kind: m["kind"].as_str().unwrap_or("?").to_string(),
            descriptor: m["config"]["descriptor"].as_str().unwrap_or("?").to_string(),
            passed: m["passed"].as_bool().unwrap_or(false),
            checks_passed: checks.iter().filter(|c| c["passed"].as_bool() == Some(true)).count(),
            checks_total: checks.len(),
            wall_time_seconds: m["wall_time_seconds"].as_f64().unwrap_or(f64::NAN),
        });
    }
    let mut o = Outcome::default();
    let path = out.join("report.csv");
    write_csv(&path, &rows)?;
    o.artifacts.push(file_name(&path));
    writeln!(o.summary, "{:<24} {:<14} {:<18} {:<6} {:>7} {:>10}", "run", "kind", "descriptor", "pass", "checks", "seconds")
        .expect("string write");
    for r in &rows {
        writeln!(
            o.summary,
            "{:<24} {:<14} {:<18} {:<6} {:>3}/{:<3} {:>10.2}",
            r.run,
            r.kind,
            r.descriptor,
            if r.passed { "yes" } else { "no" },
            r.checks_passed,
            r.checks_total,
            r.wall_time_seconds
        )
        .expect("string write");
    }
    o.results = json!({ "runs": rows.len() });
    Ok(o)
}

fn run_suite(cfg: &ExperimentConfig, out: &Path) -> Result<Outcome, StageError> {
    let mut o = Outcome::default();
    let mut results = Vec::new();
    for c in suite::criteria() {
        let r = suite::evaluate(&c, &cfg.thresholds);
        log::info!("{}", r.line());
        writeln!(o.summary, "{}", r.line()).expect("string write");
        o.checks.push(Check::flag(r.id, r.passed, r.detail.clone()));
        results.push(r);
    }
    let path = out.join("suite.csv");
    write_csv(&path, &results)?;
    o.artifacts.push(file_name(&path));
    o.results = json!({ "criteria": results });
    Ok(o)
}
