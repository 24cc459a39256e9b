//! Exact remainders Delta(x^m), truncated Voronoi dual sums and their agreement.

use std::f64::consts::PI;
use std::path::Path;

use log::warn;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coefficients::{CoefficientTable, Summatory};
use crate::error::{Error, Result};
use crate::lfun::{reduce_angle, LFunctionDescriptor};
use crate::numeric::intmath::floor_pow;
use crate::numeric::{CompensatedSum, Dd};
use crate::stats::rng;

/// Truncation and interval length of a dual-sum approximation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualSumParams {
    #[serde(rename = "N")]
    pub n: usize,
    pub delta: f64,
    pub descriptor_id: String,
}

impl DualSumParams {
    pub fn validate(&self) -> Result<()> {
        if self.n < 1 {
            return Err(Error::InvalidParameter("N must be >= 1".into()));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::InvalidParameter(format!("delta = {} outside (0, 1)", self.delta)));
        }
        Ok(())
    }
}

/// Dual frequency m (n/D)^{1/m}.
pub fn breve(n: u64, d: &LFunctionDescriptor) -> f64 {
    breve_dd(n, d).to_f64()
}

/// Dual frequency in double-double precision.
pub fn breve_dd(n: u64, d: &LFunctionDescriptor) -> Dd {
    Dd::from_i128(n as i128)
        .div(Dd::new(d.conductor))
        .nth_root(d.m)
        .mul_f64(d.m as f64)
}

fn validity_floor(d: &LFunctionDescriptor) -> f64 {
    d.conductor.powf(1.0 / (2.0 * d.m as f64))
}

fn floor_power(x: f64, m: u32) -> Result<u64> {
    floor_pow(x, m)
        .and_then(|t| u64::try_from(t).ok())
        .ok_or(Error::OutOfRange {
            t: x.powi(m as i32),
            limit: u64::MAX as f64,
        })
}

/// Delta(x^m) = S(floor(x^m)) - x^m P(ln x^m).
pub fn delta_direct(d: &LFunctionDescriptor, oracle: &Summatory, x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::InvalidParameter(format!("x = {x} must be positive")));
    }
    let t = floor_power(x, d.m)?;
    Ok(oracle.at(t)? - d.main_term(x.powi(d.m as i32)))
}

/// (Delta((x+delta)^m) - Delta(x^m)) / (x^{(m-1)/2} sigma).
///
/// The coefficient sum over the short interval and the main-term difference
/// are each formed directly, so nothing of size x^m is cancelled.
pub fn delta_pair_normalized(
    d: &LFunctionDescriptor,
    oracle: &Summatory,
    x: f64,
    delta: f64,
    sigma: f64,
) -> Result<f64> {
    if !(sigma > 0.0) {
        return Err(Error::InvalidParameter(format!("sigma = {sigma} must be positive")));
    }
    if delta == 0.0 {
        return Ok(0.0);
    }
    Ok(short_interval_raw(d, oracle, x, delta)? / (half_power(x, d.m) * sigma))
}

/// Delta((x+delta)^m) - Delta(x^m).
fn short_interval_raw(d: &LFunctionDescriptor, oracle: &Summatory, x: f64, delta: f64) -> Result<f64> {
    let y = x + delta;
    let t0 = floor_power(x, d.m)?;
    let t1 = floor_power(y, d.m)?;
    Ok(oracle.between(t0, t1)? - d.main_term_difference(x, y))
}

/// Delta(x, delta) = Delta((x+delta)^m)/(x+delta)^{(m-1)/2} - Delta(x^m)/x^{(m-1)/2}.
pub fn delta_short_interval(d: &LFunctionDescriptor, oracle: &Summatory, x: f64, delta: f64) -> Result<f64> {
    let y = x + delta;
    let (hx, hy) = (half_power(x, d.m), half_power(y, d.m));
    let raw = short_interval_raw(d, oracle, x, delta)?;
    let base = delta_direct(d, oracle, x)?;
    Ok(raw / hy + base * (1.0 / hy - 1.0 / hx))
}

#[inline]
fn half_power(x: f64, m: u32) -> f64 {
    x.powf((m as f64 - 1.0) / 2.0)
}

/// Per-term data of a truncated dual sum, reusable across sample points.
#[derive(Clone, Debug)]
pub struct DualKernel {
    m: u32,
    w: f64,
    phi: f64,
    breve: Vec<Dd>,
    /// lambda(n) / sqrt(n) / sqrt(breve(n))
    amp: Vec<f64>,
}

impl DualKernel {
    pub fn new(d: &LFunctionDescriptor, table: &CoefficientTable, n: usize) -> Result<Self> {
        if n > table.n_max {
            return Err(Error::OutOfRange {
                t: n as f64,
                limit: table.n_max as f64,
            });
        }
        let mut breve = Vec::with_capacity(n);
        let mut amp = Vec::with_capacity(n);
        for k in 1..=n {
            let b = breve_dd(k as u64, d);
            breve.push(b);
            amp.push(table.lambda(k) / ((k as f64).sqrt() * b.to_f64().sqrt()));
        }
        Ok(DualKernel {
            m: d.m,
            w: d.w as f64,
            phi: d.phi,
            breve,
            amp,
        })
    }

    pub fn len(&self) -> usize {
        self.amp.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amp.is_empty()
    }

    /// Largest dual frequency (0 for an empty kernel).
    pub fn top_frequency(&self) -> f64 {
        self.breve.last().map_or(0.0, |b| b.to_f64())
    }

    pub fn breve(&self) -> &[Dd] {
        &self.breve
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amp
    }

    fn check_floor(&self, x: f64, floor: f64) {
        if x < floor {
            warn!("x = {x} below the validity floor {floor} of the Voronoi expansion");
        }
    }

    /// (w/pi) x^{(m-1)/2} sum amp(n) sin(2 pi breve(n) x + phi).
    pub fn dual_sum(&self, x: f64) -> f64 {
        let (s, c) = self.components(x);
        let (sp, cp) = self.phi.sin_cos();
        s * cp + c * sp
    }

    /// The scaled sine and cosine sums whose combination with the phase gives
    /// the dual sum: ((w/pi) x^h sum amp sin(theta_n), (w/pi) x^h sum amp cos(theta_n)).
    pub fn components(&self, x: f64) -> (f64, f64) {
        let mut s = CompensatedSum::new();
        let mut c = CompensatedSum::new();
        for (b, a) in self.breve.iter().zip(&self.amp) {
            let (sn, cn) = (2.0 * PI * b.mul_f64(x).frac()).sin_cos();
            s.add(a * sn);
            c.add(a * cn);
        }
        let scale = self.w / PI * half_power(x, self.m);
        (scale * s.value(), scale * c.value())
    }

    /// (2w/pi) sum amp(n) sin(pi breve(n) delta) cos(pi breve(n)(2x + delta) + phi).
    pub fn delta_approx(&self, x: f64, delta: f64) -> f64 {
        let mut acc = CompensatedSum::new();
        for (b, a) in self.breve.iter().zip(&self.amp) {
            let bf = b.to_f64();
            let mid = (b.mul_f64(x) + b.mul_f64(0.5 * delta)).frac();
            acc.add(a * (PI * bf * delta).sin() * (2.0 * PI * mid + self.phi).cos());
        }
        2.0 * self.w / PI * acc.value()
    }
}

/// (w/pi) x^{(m-1)/2} sum_{n<=N} lambda(n)/sqrt(n) sin(2 pi breve(n) x + phi)/sqrt(breve(n)).
pub fn dual_sum_truncated(d: &LFunctionDescriptor, table: &CoefficientTable, x: f64, n: usize) -> Result<f64> {
    let k = DualKernel::new(d, table, n)?;
    k.check_floor(x, validity_floor(d));
    Ok(k.dual_sum(x))
}

/// Dual-sum approximation Delta(x, delta; N) to the short-interval remainder.
pub fn delta_approx(d: &LFunctionDescriptor, table: &CoefficientTable, x: f64, delta: f64, n: usize) -> Result<f64> {
    let k = DualKernel::new(d, table, n)?;
    k.check_floor(x, validity_floor(d));
    Ok(k.delta_approx(x, delta))
}

/// One sample of a direct-versus-dual comparison.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub x: f64,
    pub direct: f64,
    pub approx: f64,
    pub diff: f64,
}

/// Writes rows as CSV with columns x, direct, approx, diff.
pub fn write_comparison_csv(rows: &[ComparisonRow], path: impl AsRef<Path>) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Least-squares phase fit of Delta(x^m) against the dual sum.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PhaseFit {
    pub phi_hat: f64,
    pub phi_expected: f64,
    /// |phi_hat - phi| reduced to [0, pi].
    pub phase_error: f64,
    /// Fitted amplitude relative to the predicted normalisation.
    pub amplitude_ratio: f64,
    /// ||residual|| / ||Delta||.
    pub residual_ratio: f64,
    #[serde(skip)]
    pub samples: Vec<ComparisonRow>,
}

/// Fits Delta(x^m) ~ A (w/pi) x^h sum amp sin(theta_n + phi_hat) over M uniform x in [X, 2X].
///
/// With S and C the sine and cosine component sums the model is linear:
/// a S + b C, phi_hat = atan2(b, a) and A = sqrt(a^2 + b^2).
pub fn phase_diagnostic(
    d: &LFunctionDescriptor,
    oracle: &Summatory,
    table: &CoefficientTable,
    x_base: f64,
    samples: usize,
    n: usize,
    seed: u64,
) -> Result<PhaseFit> {
    if samples == 0 {
        return Err(Error::EmptySample);
    }
    let kernel = DualKernel::new(d, table, n)?;
    kernel.check_floor(x_base, validity_floor(d));
    let xs = rng::uniform_points(seed, x_base, samples);
    let rows: Vec<(f64, f64, f64, f64)> = xs
        .par_iter()
        .map(|&x| {
            let direct = delta_direct(d, oracle, x)?;
            let (s, c) = kernel.components(x);
            Ok((x, direct, s, c))
        })
        .collect::<Result<_>>()?;

    let (mut ss, mut sc, mut cc, mut sy, mut cy, mut yy) = (0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
    for &(_, y, s, c) in &rows {
        ss += s * s;
        sc += s * c;
        cc += c * c;
        sy += s * y;
        cy += c * y;
        yy += y * y;
    }
    let det = ss * cc - sc * sc;
    if !(det > 1e-12 * ss.max(cc).powi(2)) || ss.max(cc) == 0.0 {
        return Err(Error::DegenerateFit(format!(
            "normal matrix determinant {det:e} for {} samples",
            rows.len()
        )));
    }
    let a = (sy * cc - cy * sc) / det;
    let b = (cy * ss - sy * sc) / det;
    let phi_hat = b.atan2(a);
    let amplitude = a.hypot(b);
    let (sp, cp) = d.phi.sin_cos();
    let mut resid = 0.0;
    let mut out = Vec::with_capacity(rows.len());
    for &(x, y, s, c) in &rows {
        let fit = a * s + b * c;
        resid += (y - fit).powi(2);
        let approx = s * cp + c * sp;
        out.push(ComparisonRow {
            x,
            direct: y,
            approx,
            diff: y - approx,
        });
    }
    Ok(PhaseFit {
        phi_hat,
        phi_expected: d.phi,
        phase_error: reduce_angle(phi_hat - d.phi).abs(),
        amplitude_ratio: amplitude,
        residual_ratio: if yy > 0.0 { (resid / yy).sqrt() } else { 0.0 },
        samples: out,
    })
}

/// Mean squared gap between Delta(x, delta) and Delta(x, delta; N), relative to sigma^2.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct L2Deviation {
    #[serde(rename = "N")]
    pub n: usize,
    pub ratio: f64,
    pub std_error: f64,
    #[serde(skip)]
    pub samples: Vec<ComparisonRow>,
}

/// Empirical L2 deviation over M uniform x in [X, 2X], divided by `sigma_sq`.
#[allow(clippy::too_many_arguments)]
pub fn l2_deviation(
    d: &LFunctionDescriptor,
    oracle: &Summatory,
    table: &CoefficientTable,
    x_base: f64,
    delta: f64,
    n: usize,
    samples: usize,
    seed: u64,
    sigma_sq: f64,
) -> Result<L2Deviation> {
    if samples == 0 {
        return Err(Error::EmptySample);
    }
    if !(sigma_sq > 0.0) {
        return Err(Error::InvalidParameter(format!("sigma^2 = {sigma_sq} must be positive")));
    }
    let kernel = DualKernel::new(d, table, n)?;
    kernel.check_floor(x_base, validity_floor(d));
    let xs = rng::uniform_points(seed, x_base, samples);
    let rows: Vec<ComparisonRow> = xs
        .par_iter()
        .map(|&x| {
            let direct = delta_short_interval(d, oracle, x, delta)?;
            let approx = kernel.delta_approx(x, delta);
            Ok(ComparisonRow {
                x,
                direct,
                approx,
                diff: direct - approx,
            })
        })
        .collect::<Result<_>>()?;
    let sq: Vec<f64> = rows.iter().map(|r| r.diff * r.diff / sigma_sq).collect();
    let mean = crate::numeric::pairwise_sum(&sq) / sq.len() as f64;
    let var = if sq.len() > 1 {
        let dev: Vec<f64> = sq.iter().map(|v| (v - mean).powi(2)).collect();
        crate::numeric::pairwise_sum(&dev) / (sq.len() - 1) as f64
    } else {
        0.0
    };
    Ok(L2Deviation {
        n,
        ratio: mean,
        std_error: (var / sq.len() as f64).sqrt(),
        samples: rows,
    })
}
