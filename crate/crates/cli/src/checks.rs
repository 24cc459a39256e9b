use serde::{Deserialize, Serialize};
use shortwave_core::stats::{MomentEstimate, Summary, MIN_SAMPLES};

use crate::config::Thresholds;

/// One pass/fail assertion recorded in a manifest.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub value: f64,
    pub threshold: f64,
    pub detail: String,
}

impl Check {
    /// Passes when value <= threshold.
    pub fn at_most(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Check {
            name: name.into(),
            passed: value <= threshold,
            value,
            threshold,
            detail: format!("{value:.6e} <= {threshold:.6e}"),
        }
    }

    pub fn flag(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed,
            value: if passed { 1.0 } else { 0.0 },
            threshold: 1.0,
            detail: detail.into(),
        }
    }
}

/// Mean, variance, skewness, kurtosis and KS distance against N(0, 1).
pub fn clt_checks(s: &Summary, t: &Thresholds, samples: usize) -> Vec<Check> {
    let mut out = vec![
        Check::at_most("mean", s.mean.abs(), t.mean),
        Check::at_most("variance", (s.variance - 1.0).abs(), t.variance),
        Check::at_most("skewness", s.skewness.abs(), t.skewness),
        Check::at_most("kurtosis", (s.kurtosis - 3.0).abs(), t.kurtosis),
    ];
    if samples >= MIN_SAMPLES {
        out.push(Check::at_most("ks", s.ks, t.ks));
    }
    out
}

/// Studentised moments k >= 3 within `moment_se` standard errors of the Gaussian value.
pub fn moment_checks(est: &[MomentEstimate], t: &Thresholds) -> Vec<Check> {
    est.iter()
        .filter(|e| e.k >= 3)
        .map(|e| {
            let target = shortwave_core::stats::gaussian_moment(e.k);
            let z = if e.standard_error > 0.0 {
                (e.moment - target).abs() / e.standard_error
            } else if e.moment == target {
                0.0
            } else {
                f64::INFINITY
            };
            let mut c = Check::at_most(format!("moment-{}", e.k), z, t.moment_se);
            c.detail = format!("m_{} = {:.5} vs {} ({:.2} SE)", e.k, e.moment, target, z);
            c
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_summary_passes() {
        let s = Summary {
            mean: 0.01,
            variance: 1.02,
            skewness: -0.03,
            kurtosis: 2.9,
            ks: 0.01,
            ks_p_value: 0.5,
        };
        let checks = clt_checks(&s, &Thresholds::default(), 5000);
        assert_eq!(checks.len(), 5);
        assert!(checks.iter().all(|c| c.passed));
        let wide = Summary { kurtosis: 4.0, ..s };
        let failed: Vec<_> = clt_checks(&wide, &Thresholds::default(), 5000).into_iter().filter(|c| !c.passed).collect();
        assert_eq!(failed.len(), 1);
        assert_eq!(failed[0].name, "kurtosis");
    }

    #[test]
    fn small_samples_skip_ks() {
        let s = Summary {
            mean: 0.0,
            variance: 1.0,
            skewness: 0.0,
            kurtosis: 3.0,
            ks: f64::NAN,
            ks_p_value: f64::NAN,
        };
        assert_eq!(clt_checks(&s, &Thresholds::default(), 10).len(), 4);
    }
}
