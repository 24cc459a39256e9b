//! Predicted and truncated variances, Rankin-Selberg constants and tail checks.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Mutex, OnceLock};

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coefficients::{stream_lambda_squared, CoefficientTable};
use crate::error::{Error, Result};
use crate::lfun::{Builtin, LFunctionDescriptor, RsConstant};
use crate::numeric::primes::primes_up_to;
use crate::numeric::quadrature::GaussLegendre;
use crate::numeric::{pairwise_sum, CompensatedSum};

/// Predicted, truncated and tail-bounded variance at one delta.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VarianceReport {
    pub delta: f64,
    pub sigma_sq_asymptotic: f64,
    pub sigma_sq_truncated: f64,
    #[serde(rename = "N_used")]
    pub n_used: usize,
    pub tail_bound: f64,
    /// truncated / asymptotic
    pub ratio: f64,
}

fn check_delta(delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParameter(format!("delta = {delta} outside (0, 1)")));
    }
    Ok(())
}

/// c_f m^r delta ln^{r-1}(1/delta).
pub fn sigma_sq_asymptotic(d: &LFunctionDescriptor, delta: f64) -> Result<f64> {
    check_delta(delta)?;
    let c = d.rs_c.value().ok_or_else(|| Error::Unresolved(d.id.clone()))?;
    let r = d.rs_r as i32;
    Ok(c * (d.m as f64).powi(r) * delta * (1.0 / delta).ln().powi(r - 1))
}

#[inline]
fn breve_f64(n: f64, m: u32, conductor: f64) -> f64 {
    let t = n / conductor;
    let root = match m {
        2 => t.sqrt(),
        3 => t.cbrt(),
        _ => t.powf(1.0 / m as f64),
    };
    m as f64 * root
}

/// One summand of the truncated variance without the lambda^2 factor:
/// (2/pi^2) sin^2(pi breve delta) / (n breve).
#[inline]
fn variance_weight(n: f64, breve: f64, delta: f64) -> f64 {
    let s = (PI * breve * delta).sin();
    2.0 / (PI * PI) * s * s / (n * breve)
}

/// (2/pi^2) sum_{n<=N} lambda(n)^2/n sin^2(pi breve(n) delta)/breve(n), summed in ascending n.
pub fn sigma_sq_truncated(d: &LFunctionDescriptor, table: &CoefficientTable, delta: f64, n: usize) -> Result<f64> {
    if n > table.n_max {
        return Err(Error::OutOfRange {
            t: n as f64,
            limit: table.n_max as f64,
        });
    }
    let mut acc = CompensatedSum::new();
    for k in 1..=n {
        let l = table.lambda(k);
        if l != 0.0 {
            let kf = k as f64;
            acc.add(l * l * variance_weight(kf, breve_f64(kf, d.m, d.conductor), delta));
        }
    }
    Ok(acc.value())
}

/// Default truncation 10^3 delta^{-m}, rounded up.
pub fn default_truncation(m: u32, delta: f64) -> u64 {
    (1e3 * delta.powi(-(m as i32))).ceil() as u64
}

/// Estimate of the omitted tail (2/pi^2) sum_{n>N} lambda^2/(n breve) with
/// sin^2 replaced by 1, from the Rankin-Selberg density c (ln 2y)^{r-1}:
/// (2/pi^2) c D^{1/m} N^{-1/m} (ln 2N)^{r-1}.
pub fn tail_estimate(d: &LFunctionDescriptor, n: usize) -> Result<f64> {
    let c = d.rs_c.value().ok_or_else(|| Error::Unresolved(d.id.clone()))?;
    let nf = n.max(1) as f64;
    let m = d.m as f64;
    Ok(2.0 / (PI * PI) * c * d.conductor.powf(1.0 / m) * nf.powf(-1.0 / m) * (2.0 * nf).ln().powi(d.rs_r as i32 - 1))
}

pub fn variance_report(
    d: &LFunctionDescriptor,
    table: &CoefficientTable,
    delta: f64,
    n: usize,
) -> Result<VarianceReport> {
    let asym = sigma_sq_asymptotic(d, delta)?;
    let trunc = sigma_sq_truncated(d, table, delta, n)?;
    Ok(VarianceReport {
        delta,
        sigma_sq_asymptotic: asym,
        sigma_sq_truncated: trunc,
        n_used: n,
        tail_bound: tail_estimate(d, n)?,
        ratio: trunc / asym,
    })
}

/// Truncated variance reached by streaming lambda^2 from a segmented sieve.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StreamedVariance {
    pub delta: f64,
    #[serde(rename = "N")]
    pub n: u64,
    pub value: f64,
    /// Terms n <= exact_through were summed exactly.
    pub exact_through: u64,
    /// Contribution of exact_through < n <= N from the fitted density model (0 if none).
    pub modelled_tail: f64,
}

/// Fitted mean-square model sum_{n<=y} lambda^2 ~ y Q(ln y), deg Q = r - 1.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityModel {
    /// Coefficients of Q, lowest degree first.
    pub coeffs: Vec<f64>,
    pub fit_from: u64,
    pub fit_to: u64,
    /// Largest relative residual of the fit over its checkpoints.
    pub max_relative_residual: f64,
}

impl DensityModel {
    /// Least-squares fit of A(y)/y against powers of ln y.
    pub fn fit(points: &[(f64, f64)], degree: usize) -> Result<Self> {
        if points.len() <= degree + 1 {
            return Err(Error::DegenerateFit(format!(
                "{} checkpoints for a degree-{degree} density model",
                points.len()
            )));
        }
        let rows = points.len();
        let lmid = points.iter().map(|p| p.0.ln()).sum::<f64>() / rows as f64;
        // centred powers keep the normal equations well conditioned
        let a = DMatrix::from_fn(rows, degree + 1, |i, j| (points[i].0.ln() - lmid).powi(j as i32));
        let b = DVector::from_fn(rows, |i, _| points[i].1 / points[i].0);
        let svd = a.svd(true, true);
        let sol = svd
            .solve(&b, 1e-14)
            .map_err(|e| Error::DegenerateFit(e.to_string()))?;
        // expand sum s_j (L - lmid)^j into powers of L
        let mut coeffs = vec![0.0; degree + 1];
        for (j, s) in sol.iter().enumerate() {
            let mut binom = 1.0;
            for i in 0..=j {
                coeffs[i] += s * binom * (-lmid).powi((j - i) as i32);
                binom = binom * (j - i) as f64 / (i + 1) as f64;
            }
        }
        let mut model = DensityModel {
            coeffs,
            fit_from: points[0].0 as u64,
            fit_to: points[rows - 1].0 as u64,
            max_relative_residual: 0.0,
        };
        model.max_relative_residual = points
            .iter()
            .map(|&(y, v)| ((model.cumulative(y) - v) / v).abs())
            .fold(0.0, f64::max);
        Ok(model)
    }

    /// y Q(ln y).
    pub fn cumulative(&self, y: f64) -> f64 {
        y * horner(&self.coeffs, y.ln())
    }

    /// d/dy [y Q(ln y)] = Q(L) + Q'(L).
    pub fn density(&self, y: f64) -> f64 {
        let l = y.ln();
        let deriv: Vec<f64> = self.coeffs.iter().enumerate().skip(1).map(|(i, c)| i as f64 * c).collect();
        horner(&self.coeffs, l) + horner(&deriv, l)
    }
}

fn horner(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, v| acc * x + v)
}

/// Truncated variances for several (delta, N) targets in one sieve pass.
///
/// Terms with n <= `exact_limit` are summed exactly from the streamed squares.
/// For targets with N beyond `exact_limit`, the remaining terms are replaced
/// by the integral of the summand against the fitted density model
/// y Q(ln y) (fit over the last 1/64 of the exact range), integrated in the
/// dual variable v = breve(y) on panels pinned to the period 1/delta of sin^2.
pub fn sigma_sq_truncated_streaming(
    d: &LFunctionDescriptor,
    which: Builtin,
    targets: &[(f64, u64)],
    exact_limit: u64,
) -> Result<(Vec<StreamedVariance>, Option<DensityModel>)> {
    for &(delta, _) in targets {
        check_delta(delta)?;
    }
    let n_top = targets.iter().map(|t| t.1).max().unwrap_or(0);
    let exact_to = n_top.min(exact_limit);
    let need_model = n_top > exact_limit;
    let fit_start = exact_to / 64;
    let mut sums: Vec<CompensatedSum> = vec![CompensatedSum::new(); targets.len()];
    let mut running = CompensatedSum::new();
    let mut checkpoints: Vec<(f64, f64)> = Vec::new();
    let (m, cond) = (d.m, d.conductor);
    stream_lambda_squared(which, exact_to, |start, vals| {
        for (i, &sq) in vals.iter().enumerate() {
            if sq == 0.0 {
                continue;
            }
            let n = start + i as u64;
            let nf = n as f64;
            let b = breve_f64(nf, m, cond);
            for (acc, &(delta, cap)) in sums.iter_mut().zip(targets) {
                if n <= cap {
                    acc.add(sq * variance_weight(nf, b, delta));
                }
            }
        }
        if need_model {
            let block: f64 = pairwise_sum(vals);
            running.add(block);
            let end = start + vals.len() as u64 - 1;
            if end >= fit_start {
                checkpoints.push((end as f64, running.value()));
            }
        }
    })?;

    let model = if need_model {
        Some(DensityModel::fit(&checkpoints, d.rs_r as usize - 1)?)
    } else {
        None
    };
    let gl = GaussLegendre::new(20);
    let out = targets
        .iter()
        .zip(sums)
        .map(|(&(delta, cap), acc)| {
            let tail = match &model {
                Some(model) if cap > exact_to => {
                    let mf = m as f64;
                    let (v0, v1) = (breve_f64(exact_to as f64, m, cond), breve_f64(cap as f64, m, cond));
                    let panels = (((v1 - v0) * delta * 2.0).ceil() as usize).max(8);
                    gl.composite(v0, v1, panels, |v| {
                        let y = cond * (v / mf).powi(m as i32);
                        let s = (PI * v * delta).sin();
                        2.0 / (PI * PI) * s * s * model.density(y) * mf / (v * v)
                    })
                }
                _ => 0.0,
            };
            StreamedVariance {
                delta,
                n: cap,
                value: acc.value() + tail,
                exact_through: cap.min(exact_to),
                modelled_tail: tail,
            }
        })
        .collect();
    Ok((out, model))
}

/// One consecutive pair of truncations in a tail check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailPair {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "N_big")]
    pub n_big: usize,
    pub increment: f64,
    pub bound: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailReport {
    /// C fitted from the smallest pair.
    pub constant: f64,
    /// Allowed excess of an increment over C N^{-1/m} (ln N)^{r-1}.
    pub slack: f64,
    /// Least-squares slope of ln(increment / (ln N)^{r-1}) against ln N, if at least two pairs.
    pub exponent_fit: Option<f64>,
    pub pairs: Vec<TailPair>,
    pub passed: bool,
}

/// Factor by which later increments may exceed the bound fitted on the first pair.
pub const TAIL_SLACK: f64 = 3.0;

/// Checks sigma^2(delta; N') - sigma^2(delta; N) <= C N^{-1/m} (ln N)^{r-1} on consecutive pairs.
pub fn tail_bound_check(
    d: &LFunctionDescriptor,
    table: &CoefficientTable,
    delta: f64,
    n_list: &[usize],
) -> Result<TailReport> {
    let mut ns: Vec<usize> = n_list.to_vec();
    ns.sort_unstable();
    ns.dedup();
    if let Some(&top) = ns.last() {
        if top > table.n_max {
            return Err(Error::OutOfRange {
                t: top as f64,
                limit: table.n_max as f64,
            });
        }
    }
    let values: Vec<f64> = ns
        .iter()
        .map(|&n| sigma_sq_truncated(d, table, delta, n))
        .collect::<Result<_>>()?;
    let shape = |n: usize| {
        let nf = n.max(2) as f64;
        nf.powf(-1.0 / d.m as f64) * nf.ln().powi(d.rs_r as i32 - 1)
    };
    let increments: Vec<(usize, usize, f64)> = ns
        .windows(2)
        .zip(values.windows(2))
        .map(|(n, v)| (n[0], n[1], v[1] - v[0]))
        .collect();
    let constant = increments.first().map_or(0.0, |&(n, _, inc)| inc / shape(n));
    let pairs: Vec<TailPair> = increments
        .iter()
        .map(|&(n, n_big, increment)| TailPair {
            n,
            n_big,
            increment,
            bound: constant * shape(n),
        })
        .collect();
    let passed = pairs.iter().all(|p| p.increment <= TAIL_SLACK * p.bound);
    let exponent_fit = if pairs.len() >= 2 {
        let pts: Vec<(f64, f64)> = pairs
            .iter()
            .filter(|p| p.increment > 0.0)
            .map(|p| {
                let nf = p.n.max(2) as f64;
                (nf.ln(), (p.increment / nf.ln().powi(d.rs_r as i32 - 1)).ln())
            })
            .collect();
        slope(&pts)
    } else {
        None
    };
    Ok(TailReport {
        constant,
        slack: TAIL_SLACK,
        exponent_fit,
        pairs,
        passed,
    })
}

fn slope(pts: &[(f64, f64)]) -> Option<f64> {
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Dyadic Rankin-Selberg estimate of c_f.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RsFit {
    pub c_hat: f64,
    /// (y, sum_{n<=y} lambda^2 / (y (ln 2y)^{r-1})) at y = n_max/8, /4, /2, n_max.
    pub points: Vec<(usize, f64)>,
    /// (max - min) / mean over the dyadic points.
    pub spread: f64,
    pub converged: bool,
    /// Slope of ln(A(y)/y) against ln ln(2y); estimates r - 1 (diagnostic only).
    pub log_slope: Option<f64>,
}

/// Largest spread for which a dyadic fit counts as converged.
pub const RS_SPREAD_LIMIT: f64 = 0.5;

pub fn rankin_selberg_fit(table: &CoefficientTable, r: u32) -> Result<RsFit> {
    if table.n_max < 10_000 {
        return Err(Error::InvalidParameter(format!(
            "Rankin-Selberg fit needs n_max >= 10^4, table has {}",
            table.n_max
        )));
    }
    if r < 1 {
        return Err(Error::InvalidParameter("r must be >= 1".into()));
    }
    let ys = [table.n_max / 8, table.n_max / 4, table.n_max / 2, table.n_max];
    let points: Vec<(usize, f64)> = ys
        .iter()
        .map(|&y| {
            let yf = y as f64;
            (y, table.sum_sq_through(y) / (yf * (2.0 * yf).ln().powi(r as i32 - 1)))
        })
        .collect();
    let c_hat = points.iter().map(|p| p.1).sum::<f64>() / points.len() as f64;
    let (lo, hi) = points
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| (lo.min(p.1), hi.max(p.1)));
    let spread = if c_hat != 0.0 { (hi - lo) / c_hat.abs() } else { f64::INFINITY };
    let log_pts: Vec<(f64, f64)> = ys
        .iter()
        .filter(|&&y| table.sum_sq_through(y) > 0.0)
        .map(|&y| {
            let yf = y as f64;
            ((2.0 * yf).ln().ln(), (table.sum_sq_through(y) / yf).ln())
        })
        .collect();
    Ok(RsFit {
        c_hat,
        points,
        spread,
        converged: spread <= RS_SPREAD_LIMIT,
        log_slope: slope(&log_pts),
    })
}

/// Rankin-Selberg constant fitted from a specific table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    pub descriptor_id: String,
    pub n_max: usize,
    pub fit: RsFit,
}

fn calibration_cache() -> &'static Mutex<HashMap<(String, usize), Calibration>> {
    static CACHE: OnceLock<Mutex<HashMap<(String, usize), Calibration>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Fits c_f from `table`, cached per (descriptor id, n_max).
pub fn calibrate(d: &LFunctionDescriptor, table: &CoefficientTable) -> Result<Calibration> {
    let key = (d.id.clone(), table.n_max);
    if let Some(c) = calibration_cache().lock().expect("calibration cache").get(&key) {
        return Ok(c.clone());
    }
    let cal = Calibration {
        descriptor_id: d.id.clone(),
        n_max: table.n_max,
        fit: rankin_selberg_fit(table, d.rs_r)?,
    };
    calibration_cache()
        .lock()
        .expect("calibration cache")
        .insert(key, cal.clone());
    Ok(cal)
}

/// The descriptor with rs_c resolved: unchanged when analytic, otherwise
/// calibrated from `table`.
pub fn resolve_descriptor(d: &LFunctionDescriptor, table: Option<&CoefficientTable>) -> Result<LFunctionDescriptor> {
    match d.rs_c {
        RsConstant::Analytic(_) => Ok(d.clone()),
        RsConstant::EstimateFromData => {
            let table = table.ok_or_else(|| Error::Unresolved(d.id.clone()))?;
            let cal = calibrate(d, table)?;
            let mut out = d.clone();
            out.rs_c = RsConstant::Analytic(cal.fit.c_hat);
            Ok(out)
        }
    }
}

/// Truncated Euler product for c_{tau_k} with an enclosure of the omitted primes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EulerProduct {
    pub value: f64,
    /// The true constant lies in value +- half_width.
    pub half_width: f64,
}

/// (1 - 1/p)^{k^2} sum_{j>=0} C(j+k-1, j)^2 p^{-j}.
pub fn euler_local_factor(k: u32, p: u64) -> f64 {
    euler_local_log(k, p).exp()
}

fn euler_local_log(k: u32, p: u64) -> f64 {
    let x = 1.0 / p as f64;
    let kf = k as f64;
    // series minus its j = 0 term, to keep precision when p is large
    let mut term = 1.0;
    let mut rest = CompensatedSum::new();
    let mut j = 0.0;
    loop {
        let ratio = ((j + kf) / (j + 1.0)).powi(2) * x;
        term *= ratio;
        j += 1.0;
        rest.add(term);
        let next_ratio = ((j + kf) / (j + 1.0)).powi(2) * x;
        if next_ratio < 1.0 && term * next_ratio / (1.0 - next_ratio) < 1e-17 * (1.0 + rest.value()) {
            break;
        }
    }
    kf * kf * (-x).ln_1p() + rest.value().ln_1p()
}

/// c_{tau_k} = (1/(k^2-1)!) prod_p (1 - 1/p)^{k^2} sum_j C(j+k-1, j)^2 p^{-j} over p <= P.
///
/// The omitted primes change the logarithm by at most sum_{p>P} k^4/p^2 <= k^4/(P ln P).
pub fn euler_product_c_tau_k(k: u32, cutoff: usize) -> Result<EulerProduct> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!("k = {k} must be >= 2")));
    }
    if cutoff < 1000 {
        return Err(Error::InvalidParameter(format!("prime cutoff {cutoff} must be >= 1000")));
    }
    let primes = primes_up_to(cutoff);
    let partial: Vec<f64> = primes
        .par_chunks(4096)
        .map(|chunk| {
            let s: CompensatedSum = chunk.iter().map(|&p| euler_local_log(k, p as u64)).collect();
            s.value()
        })
        .collect();
    let log_sum: CompensatedSum = partial.into_iter().collect();
    let k2 = (k * k) as u64;
    let factorial: f64 = (1..k2).map(|i| i as f64).product();
    let value = log_sum.value().exp() / factorial;
    let p = cutoff as f64;
    let tail = (k as f64).powi(4) / (p * p.ln());
    Ok(EulerProduct {
        value,
        half_width: value * tail.exp_m1(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::{sieve_gaussian_ideals, sieve_tau_k};
    use crate::lfun::builtin_descriptor;

    fn gauss() -> LFunctionDescriptor {
        builtin_descriptor(Builtin::GaussianIdeals).unwrap()
    }

    #[test]
    fn asymptotic_examples() {
        let g = sigma_sq_asymptotic(&gauss(), 0.01).unwrap();
        assert!((g - 0.01 * 100f64.ln()).abs() < 1e-15);
        assert!((g - 0.04605).abs() < 1e-5);
        let t = builtin_descriptor(Builtin::TauK(2)).unwrap();
        let v = sigma_sq_asymptotic(&t, 0.01).unwrap();
        assert!((v - 16.0 / (PI * PI) * 0.01 * 100f64.ln().powi(3)).abs() < 1e-12);
        assert!((v - 1.584).abs() < 1e-3);
    }

    #[test]
    fn linear_in_delta_when_r_is_one() {
        let mut d = builtin_descriptor(Builtin::Ramanujan).unwrap();
        assert!(matches!(sigma_sq_asymptotic(&d, 0.1), Err(Error::Unresolved(_))));
        d.rs_c = RsConstant::Analytic(0.7);
        let a = sigma_sq_asymptotic(&d, 0.01).unwrap();
        let b = sigma_sq_asymptotic(&d, 0.02).unwrap();
        assert_eq!(b / a, 2.0);
    }

    #[test]
    fn single_term_truncations() {
        let g = gauss();
        let table = sieve_gaussian_ideals(10).unwrap();
        let delta = 0.137;
        let v = sigma_sq_truncated(&g, &table, delta, 1).unwrap();
        assert!((v - 2.0 / (PI * PI) * (PI * delta).sin().powi(2)).abs() < 1e-16);
        let t = builtin_descriptor(Builtin::TauK(2)).unwrap();
        let table = sieve_tau_k(2, 10).unwrap();
        let v = sigma_sq_truncated(&t, &table, delta, 1).unwrap();
        assert!((v - (2.0 * PI * delta).sin().powi(2) / (PI * PI)).abs() < 1e-16);
        assert!(sigma_sq_truncated(&t, &table, delta, 11).is_err());
    }

    #[test]
    fn truncated_monotone_and_bounded() {
        let g = gauss();
        let table = sieve_gaussian_ideals(2000).unwrap();
        let delta = 0.01;
        let mut prev = 0.0;
        let mut bound = CompensatedSum::new();
        for n in 1..=2000 {
            let v = sigma_sq_truncated(&g, &table, delta, n).unwrap();
            assert!(v >= prev);
            prev = v;
            let nf = n as f64;
            let b = breve_f64(nf, 2, 4.0);
            let l = table.lambda(n);
            bound.add(2.0 / (PI * PI) * l * l / nf * (PI * b * delta).powi(2).min(1.0) / b);
            assert!(v <= bound.value() * (1.0 + 1e-12));
        }
    }

    #[test]
    fn report_fields_positive() {
        let g = gauss();
        let table = sieve_gaussian_ideals(10_000).unwrap();
        let r = variance_report(&g, &table, 0.05, 10_000).unwrap();
        for v in [r.sigma_sq_asymptotic, r.sigma_sq_truncated, r.tail_bound, r.ratio] {
            assert!(v.is_finite() && v > 0.0);
        }
        let json = serde_json::to_value(&r).unwrap();
        assert!(json.get("N_used").is_some());
    }

    #[test]
    fn euler_local_factor_at_two_and_three() {
        // (1/2)^4 * 12 = 3/4 and (2/3)^4 * (4/3)/(2/3)^3 = 8/9
        assert!((euler_local_factor(2, 2) - 0.75).abs() < 1e-15);
        assert!((euler_local_factor(2, 3) - 8.0 / 9.0).abs() < 1e-15);
        for p in [5u64, 101, 1_000_003] {
            let x = 1.0 / p as f64;
            assert!((euler_local_factor(2, p) - (1.0 - x * x)).abs() < 1e-15);
        }
    }

    #[test]
    fn euler_product_tau2() {
        let e = euler_product_c_tau_k(2, 1_000_000).unwrap();
        assert!((e.value - 1.0 / (PI * PI)).abs() < 1e-6, "{e:?}");
        assert!((e.value - 1.0 / (PI * PI)).abs() <= e.half_width);
        let coarse = euler_product_c_tau_k(2, 1000).unwrap();
        assert!((coarse.value - e.value).abs() < coarse.half_width);
        assert!(euler_product_c_tau_k(1, 1000).is_err());
        assert!(euler_product_c_tau_k(2, 999).is_err());
    }

    #[test]
    fn rankin_selberg_constant_table() {
        let ones = CoefficientTable::from_values("one", &vec![1.0; 20_000]);
        let fit = rankin_selberg_fit(&ones, 1).unwrap();
        assert!((fit.c_hat - 1.0).abs() < 1e-6);
        assert!(fit.converged);
        let short = CoefficientTable::from_values("one", &[1.0; 100]);
        assert!(rankin_selberg_fit(&short, 1).is_err());
    }

    #[test]
    fn rankin_selberg_gaussian_small() {
        let table = sieve_gaussian_ideals(1_000_000).unwrap();
        let fit = rankin_selberg_fit(&table, 2).unwrap();
        assert!(fit.c_hat > 0.2 && fit.c_hat < 0.3, "{fit:?}");
    }

    #[test]
    fn tail_check_single_and_control() {
        let table = CoefficientTable::from_values("one", &vec![1.0; 1_000_000]);
        let d = LFunctionDescriptor::new(
            "ones",
            2,
            1.0,
            vec![0.0, 0.0],
            1,
            0,
            RsConstant::Analytic(1.0),
            1,
            crate::lfun::Polynomial::zero(),
        )
        .unwrap();
        let one = tail_bound_check(&d, &table, 0.05, &[1000]).unwrap();
        assert!(one.passed && one.pairs.is_empty());
        let rep = tail_bound_check(&d, &table, 0.05, &[10_000, 100_000, 1_000_000]).unwrap();
        assert!(rep.passed, "{rep:?}");
        // increments of sum 1/(n breve) sin^2 average to N^{-1/2}(1 - 10^{-1/2}) / (2 pi^2) * 2
        let s = rep.exponent_fit.unwrap();
        assert!((s + 0.5).abs() < 0.05, "{s}");
        for p in &rep.pairs {
            let closed = 2.0 / (PI * PI) * 0.5 * (p.n as f64).powf(-0.5) * (1.0 - 10f64.powf(-0.5));
            assert!((p.increment / closed - 1.0).abs() < 0.05, "{p:?}");
        }
    }

    #[test]
    fn streaming_matches_table_and_model_tail() {
        let g = gauss();
        let table = sieve_gaussian_ideals(2_000_000).unwrap();
        let targets = [(0.05, 300_000u64), (0.02, 2_000_000)];
        let (exact, model) = sigma_sq_truncated_streaming(&g, Builtin::GaussianIdeals, &targets, 10_000_000).unwrap();
        assert!(model.is_none());
        for (s, &(delta, n)) in exact.iter().zip(&targets) {
            let direct = sigma_sq_truncated(&g, &table, delta, n as usize).unwrap();
            assert!((s.value - direct).abs() < 1e-13 * direct);
        }
        // model the last 1.8e6 terms from a fit over the first 2e5
        let (modelled, model) = sigma_sq_truncated_streaming(&g, Builtin::GaussianIdeals, &[(0.02, 2_000_000)], 200_000).unwrap();
        let model = model.unwrap();
        assert!(model.max_relative_residual < 0.01, "{model:?}");
        assert!((modelled[0].value / exact[1].value - 1.0).abs() < 2e-3, "{modelled:?} vs {exact:?}");
    }
}
