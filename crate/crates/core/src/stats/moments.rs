use serde::{Deserialize, Serialize};
use libm::erfc;

use crate::error::{Error, Result};
use crate::numeric::pairwise_sum;

/// Standard normal CDF, 0.5 erfc(-t / sqrt 2).
pub fn cdf_normal(t: f64) -> f64 {
    0.5 * erfc(-t / std::f64::consts::SQRT_2)
}

/// k-th moment of N(0, 1): k! / (2^{k/2} (k/2)!) for even k, 0 for odd k.
pub fn gaussian_moment(k: u32) -> f64 {
    if k % 2 == 1 {
        return 0.0;
    }
    // (k-1)!! = k! / (2^{k/2} (k/2)!)
    (1..k).step_by(2).map(|i| i as f64).product()
}

/// Studentised sample moment with its jackknife standard error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentEstimate {
    pub k: u32,
    pub moment: f64,
    pub standard_error: f64,
}

/// Smallest sample for moment and KS analysis.
pub const MIN_SAMPLES: usize = 30;

/// mean((z - mean)/sd)^k for k = 1..=k_max (population sd), with
/// leave-one-out jackknife standard errors.
pub fn empirical_moments(z: &[f64], k_max: u32) -> Result<Vec<MomentEstimate>> {
    let n = z.len();
    if n < MIN_SAMPLES {
        return Err(Error::InvalidParameter(format!("need at least {MIN_SAMPLES} samples, got {n}")));
    }
    let k_max = k_max as usize;
    let mean = pairwise_sum(z) / n as f64;
    let c: Vec<f64> = z.iter().map(|v| v - mean).collect();
    // power sums S_j of the centred data, j = 0..=k_max
    let mut sums = vec![0.0; k_max.max(2) + 1];
    let mut pw = vec![1.0; n];
    sums[0] = n as f64;
    for s in sums.iter_mut().skip(1) {
        for (p, v) in pw.iter_mut().zip(&c) {
            *p *= v;
        }
        *s = pairwise_sum(&pw);
    }
    let full: Vec<f64> = (1..=k_max).map(|k| studentised(&sums, n as f64, k)).collect();

    let mut loo = vec![Vec::with_capacity(n); k_max];
    let mut reduced = sums.clone();
    for &ci in &c {
        let mut p = 1.0;
        for j in 0..sums.len() {
            reduced[j] = sums[j] - p;
            p *= ci;
        }
        for (k, out) in loo.iter_mut().enumerate() {
            out.push(studentised(&reduced, n as f64 - 1.0, k + 1));
        }
    }
    Ok(full
        .into_iter()
        .zip(loo)
        .enumerate()
        .map(|(i, (moment, reps))| {
            let avg = pairwise_sum(&reps) / n as f64;
            let dev: Vec<f64> = reps.iter().map(|r| (r - avg).powi(2)).collect();
            MomentEstimate {
                k: i as u32 + 1,
                moment,
                standard_error: ((n as f64 - 1.0) / n as f64 * pairwise_sum(&dev)).sqrt(),
            }
        })
        .collect())
}

/// mu_k / mu_2^{k/2} from power sums about an arbitrary origin.
fn studentised(sums: &[f64], count: f64, k: usize) -> f64 {
    let raw = |j: usize| sums[j] / count;
    let shift = raw(1);
    let central = |j: usize| -> f64 {
        let mut acc = 0.0;
        let mut binom = 1.0;
        for l in 0..=j {
            acc += binom * raw(l) * (-shift).powi((j - l) as i32);
            binom = binom * (j - l) as f64 / (l + 1) as f64;
        }
        acc
    };
    let mu2 = central(2);
    if !(mu2 > 0.0) {
        return 0.0;
    }
    let mu_k = central(k);
    let half = (k / 2) as i32;
    if k.is_multiple_of(2) {
        mu_k / mu2.powi(half)
    } else {
        mu_k / (mu2.powi(half) * mu2.sqrt())
    }
}

/// Kolmogorov-Smirnov distance to N(0, 1) and its asymptotic p-value.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KsResult {
    pub d: f64,
    pub p_value: f64,
}

pub fn ks_statistic(z: &[f64]) -> Result<KsResult> {
    let n = z.len();
    if n < MIN_SAMPLES {
        return Err(Error::InvalidParameter(format!("need at least {MIN_SAMPLES} samples, got {n}")));
    }
    let mut sorted = z.to_vec();
    sorted.sort_by(|a, b| a.total_cmp(b));
    let nf = n as f64;
    let mut d: f64 = 0.0;
    for (i, &v) in sorted.iter().enumerate() {
        let f = cdf_normal(v);
        d = d.max(f - i as f64 / nf).max((i + 1) as f64 / nf - f);
    }
    let lambda = (nf.sqrt() + 0.12 + 0.11 / nf.sqrt()) * d;
    Ok(KsResult {
        d,
        p_value: kolmogorov_survival(lambda),
    })
}

/// P(K > lambda) for the Kolmogorov distribution.
pub fn kolmogorov_survival(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    if lambda < 1.0 {
        // theta-function form, fast for small lambda
        let c = -std::f64::consts::PI.powi(2) / (8.0 * lambda * lambda);
        let s: f64 = (1..=20).map(|j| (c * ((2 * j - 1) as f64).powi(2)).exp()).sum();
        return (1.0 - (2.0 * std::f64::consts::PI).sqrt() / lambda * s).clamp(0.0, 1.0);
    }
    let s: f64 = (1..=100)
        .map(|j| {
            let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
            sign * (-2.0 * (j * j) as f64 * lambda * lambda).exp()
        })
        .sum();
    (2.0 * s).clamp(0.0, 1.0)
}

/// Mean, variance, skewness, kurtosis (non-excess) and KS distance of a sample.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub mean: f64,
    /// Unbiased (M - 1) variance.
    pub variance: f64,
    pub skewness: f64,
    pub kurtosis: f64,
    pub ks: f64,
    pub ks_p_value: f64,
}

/// Summary statistics with every sum taken pairwise in sample order.
pub fn summarize(z: &[f64]) -> Result<Summary> {
    if z.is_empty() {
        return Err(Error::EmptySample);
    }
    let n = z.len() as f64;
    let mean = pairwise_sum(z) / n;
    let central = |p: i32| {
        let v: Vec<f64> = z.iter().map(|x| (x - mean).powi(p)).collect();
        pairwise_sum(&v) / n
    };
    let (m2, m3, m4) = (central(2), central(3), central(4));
    let (skewness, kurtosis) = if m2 > 0.0 {
        (m3 / m2.powf(1.5), m4 / (m2 * m2))
    } else {
        (0.0, 0.0)
    };
    let ks = if z.len() >= MIN_SAMPLES {
        ks_statistic(z)?
    } else {
        KsResult {
            d: f64::NAN,
            p_value: f64::NAN,
        }
    };
    Ok(Summary {
        mean,
        variance: if z.len() > 1 { m2 * n / (n - 1.0) } else { 0.0 },
        skewness,
        kurtosis,
        ks: ks.d,
        ks_p_value: ks.p_value,
    })
}
