//! The acceptance battery A1-A10. Each criterion is self-contained and
//! reports a verdict plus the measured numbers behind it.

use std::f64::consts::PI;
use std::time::Instant;

use anyhow::{ensure, Result};
use num_bigint::{BigInt, BigUint, Sign};
use serde::Serialize;
use shortwave_core::algebra::{
    is_zero_alternating, min_alternating_sum, moment_oracle, powerfree_kernel, DEFAULT_TUPLE_BUDGET,
};
use shortwave_core::coefficients::{
    sieve_gaussian_ideals, sieve_tau_k, summatory_gaussian_exact, summatory_tau2_hyperbola, summatory_tau3_hyperbola,
    Summatory,
};
use shortwave_core::lfun::{builtin_descriptor, main_term_polynomial, zeta_laurent, Builtin, LFunctionDescriptor};
use shortwave_core::stats::{gaussian_moment, rng, sample_uniform, window_expectation, Method};
use shortwave_core::variance::{
    euler_product_c_tau_k, rankin_selberg_fit, sigma_sq_asymptotic, sigma_sq_truncated, sigma_sq_truncated_streaming,
};
use shortwave_core::voronoi::l2_deviation;

use crate::checks::clt_checks;
use crate::config::Thresholds;

/// Euler-Mascheroni constant to double precision.
const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

pub struct Criterion {
    pub id: &'static str,
    pub title: &'static str,
    run: fn(&Thresholds) -> Result<(bool, String)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: &'static str,
    pub title: &'static str,
    pub passed: bool,
    pub seconds: f64,
    pub detail: String,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "{} {} {} ({:.1} s): {}",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.title,
            self.seconds,
            self.detail
        )
    }
}

pub fn criteria() -> Vec<Criterion> {
    vec![
        Criterion {
            id: "A1",
            title: "oracle equivalence",
            run: a1_oracles,
        },
        Criterion {
            id: "A2",
            title: "alternating-sum lower bound",
            run: a2_lower_bound,
        },
        Criterion {
            id: "A3",
            title: "variance asymptotics",
            run: a3_variance,
        },
        Criterion {
            id: "A4",
            title: "Euler product constant",
            run: a4_euler_product,
        },
        Criterion {
            id: "A5",
            title: "dual-sum fidelity",
            run: a5_dual_fidelity,
        },
        Criterion {
            id: "A6",
            title: "Gaussian limit at desk scale",
            run: a6_clt,
        },
        Criterion {
            id: "A7",
            title: "windowed mean and variance",
            run: a7_window,
        },
        Criterion {
            id: "A8",
            title: "diagonal moment identity",
            run: a8_diagonal,
        },
        Criterion {
            id: "A9",
            title: "main-term engine",
            run: a9_main_term,
        },
        Criterion {
            id: "A10",
            title: "unit exactness",
            run: a10_exactness,
        },
    ]
}

/// Runs one criterion; an error counts as a failure with the error as detail.
pub fn evaluate(c: &Criterion, t: &Thresholds) -> CriterionResult {
    let start = Instant::now();
    let (passed, detail) = match (c.run)(t) {
        Ok(v) => v,
        Err(e) => (false, format!("error: {e:#}")),
    };
    CriterionResult {
        id: c.id,
        title: c.title,
        passed,
        seconds: start.elapsed().as_secs_f64(),
        detail,
    }
}

fn random_points(seed: u64, count: u64, max: u64) -> Vec<u64> {
    (0..count).map(|i| 1 + (rng::unit(seed, i) * max as f64) as u64).map(|t| t.min(max)).collect()
}

fn a1_oracles(_: &Thresholds) -> Result<(bool, String)> {
    const T_MAX: u64 = 1_000_000;
    let tau2 = sieve_tau_k(2, T_MAX as usize)?;
    let tau3 = sieve_tau_k(3, T_MAX as usize)?;
    let gauss = sieve_gaussian_ideals(T_MAX as usize)?;
    let gauss_scale = gauss.exact_scale().unwrap_or(0);
    ensure!(gauss_scale > 0, "gaussian table is not exact");
    let mut mismatches = Vec::new();
    for t in random_points(0xA1, 100, T_MAX) {
        let i = t as usize;
        if tau2.summatory_exact_scaled(i) != Some(summatory_tau2_hyperbola(t) as i128) {
            mismatches.push(format!("tau_2 at {t}"));
        }
        if tau3.summatory_exact_scaled(i) != Some(summatory_tau3_hyperbola(t) as i128) {
            mismatches.push(format!("tau_3 at {t}"));
        }
        // both sides as multiples of 1/4
        let sieved = gauss.summatory_exact_scaled(i).map(|s| s * 4 / gauss_scale);
        if sieved != Some(summatory_gaussian_exact(t).0) {
            mismatches.push(format!("gaussian at {t}"));
        }
    }
    Ok((
        mismatches.is_empty(),
        if mismatches.is_empty() {
            "300 exact comparisons at 100 random T <= 1e6, all equal".into()
        } else {
            format!("mismatches: {}", mismatches.join(", "))
        },
    ))
}

fn a2_lower_bound(_: &Thresholds) -> Result<(bool, String)> {
    let mut ok = true;
    let mut parts = Vec::new();
    for (m, n, k) in [(2u32, 12u64, 3usize), (3, 6, 2)] {
        let r = min_alternating_sum(m, n, k, DEFAULT_TUPLE_BUDGET)?;
        let holds = r.holds && r.min_abs_lower >= r.bound;
        ok &= holds;
        parts.push(format!(
            "(m={m}, N={n}, k={k}) min {:.4e} >= bound {:.4e}: {holds}, {} exact zeros in {} tuples",
            r.min_abs, r.bound, r.exact_zeros, r.tuples_checked
        ));
    }
    Ok((ok, parts.join("; ")))
}

fn gaussian() -> Result<LFunctionDescriptor> {
    Ok(builtin_descriptor(Builtin::GaussianIdeals)?)
}

fn a3_variance(_: &Thresholds) -> Result<(bool, String)> {
    let g = gaussian()?;
    let targets = [(1e-2, 10_000_000u64), (1e-3, 1_000_000_000), (1e-4, 100_000_000_000)];
    let (rows, model) = sigma_sq_truncated_streaming(&g, Builtin::GaussianIdeals, &targets, 1_000_000_000)?;
    let ratios: Vec<f64> = rows
        .iter()
        .map(|r| Ok(r.value / sigma_sq_asymptotic(&g, r.delta)?))
        .collect::<Result<_>>()?;
    let last = *ratios.last().expect("three targets");
    let in_band = (0.7..=1.3).contains(&last);
    let closer = ratios.windows(2).all(|w| (w[1] - 1.0).abs() < (w[0] - 1.0).abs());
    let tail = rows.last().map_or(0.0, |r| r.modelled_tail);
    Ok((
        in_band && closer,
        format!(
            "ratios {:.5} / {:.5} / {:.5} at delta 1e-2 / 1e-3 / 1e-4; modelled tail beyond 1e9 {:.3e} (fit residual {:.1e})",
            ratios[0],
            ratios[1],
            ratios[2],
            tail,
            model.map_or(0.0, |m| m.max_relative_residual)
        ),
    ))
}

fn a4_euler_product(_: &Thresholds) -> Result<(bool, String)> {
    let e = euler_product_c_tau_k(2, 1_000_000)?;
    let target = 1.0 / (PI * PI);
    let table = sieve_tau_k(2, 10_000_000)?;
    let fit = rankin_selberg_fit(&table, 4)?;
    let rel = (fit.c_hat / e.value - 1.0).abs();
    let ok = (e.value - target).abs() <= 1e-4 && rel <= 0.25;
    Ok((
        ok,
        format!(
            "product {:.8} (+- {:.1e}) vs 1/pi^2 = {:.8}; Rankin-Selberg fit {:.5} ({:.1}% off)",
            e.value,
            e.half_width,
            target,
            fit.c_hat,
            100.0 * rel
        ),
    ))
}

fn a5_dual_fidelity(_: &Thresholds) -> Result<(bool, String)> {
    const DELTA: f64 = 0.05;
    const SAMPLES: usize = 500;
    let ns = [100usize, 1_000, 10_000];
    let mut ok = true;
    let mut parts = Vec::new();
    for (which, x) in [(Builtin::GaussianIdeals, 1e5), (Builtin::TauK(2), 1e4)] {
        let d = builtin_descriptor(which)?;
        let table = shortwave_core::coefficients::builtin_table(which, 10_000)?;
        let oracle = Summatory::for_descriptor(&d, None)?;
        let sigma_sq = sigma_sq_asymptotic(&d, DELTA)?;
        let rows = ns
            .iter()
            .map(|&n| l2_deviation(&d, &oracle, &table, x, DELTA, n, SAMPLES, 0xA5, sigma_sq))
            .collect::<shortwave_core::Result<Vec<_>>>()?;
        let top = rows.last().expect("three truncations");
        let monotone = rows.windows(2).all(|w| w[1].ratio <= w[0].ratio + 2.0 * w[0].std_error.hypot(w[1].std_error));
        let pass = top.ratio <= 0.1 && monotone;
        ok &= pass;
        parts.push(format!(
            "{which} X={x}: ratios {}",
            rows.iter().map(|r| format!("{:.4}+-{:.4}", r.ratio, r.std_error)).collect::<Vec<_>>().join(" / ")
        ));
    }
    Ok((ok, parts.join("; ")))
}

fn a6_clt(t: &Thresholds) -> Result<(bool, String)> {
    const DELTA: f64 = 0.02;
    const SAMPLES: usize = 5000;
    let mut ok = true;
    let mut parts = Vec::new();
    for (which, x) in [(Builtin::GaussianIdeals, 1e6), (Builtin::TauK(2), 1e4)] {
        let d = builtin_descriptor(which)?;
        let oracle = Summatory::for_descriptor(&d, None)?;
        let mut passes = 0;
        let mut worst = Vec::new();
        for seed in 1..=5u64 {
            let run = sample_uniform(&d, &oracle, None, x, DELTA, SAMPLES, seed, Method::Direct)?;
            let checks = clt_checks(&run.summary, t, SAMPLES);
            if checks.iter().all(|c| c.passed) {
                passes += 1;
            } else {
                worst.extend(checks.iter().filter(|c| !c.passed).map(|c| format!("seed {seed} {} {:.4}", c.name, c.value)));
            }
        }
        ok &= passes >= 4;
        parts.push(format!(
            "{which} X={x}: {passes}/5 seeds{}",
            if worst.is_empty() { String::new() } else { format!(" ({})", worst.join(", ")) }
        ));
    }
    Ok((ok, parts.join("; ")))
}

fn a7_window(_: &Thresholds) -> Result<(bool, String)> {
    let g = gaussian()?;
    let (x, delta, n) = (1e4, 0.1, 100);
    let table = sieve_gaussian_ideals(n)?;
    let sigma_sq = sigma_sq_truncated(&g, &table, delta, n)?;
    let e1 = window_expectation(&g, &table, x, delta, n, 1)?.value;
    let e2 = window_expectation(&g, &table, x, delta, n, 2)?.value;
    let r1 = e1.abs() / sigma_sq.sqrt();
    let r2 = (e2 - sigma_sq).abs() / sigma_sq;
    Ok((
        r1 <= 1e-6 && r2 <= 1e-3,
        format!("|E[Delta]|/sigma = {r1:.3e}, |E[Delta^2] - sigma^2|/sigma^2 = {r2:.3e}"),
    ))
}

fn a8_diagonal(_: &Thresholds) -> Result<(bool, String)> {
    let g = gaussian()?;
    let small = sieve_gaussian_ideals(20)?;
    let sigma_small = sigma_sq_truncated(&g, &small, 0.1, 20)?;
    let k2 = moment_oracle(&g, &small, 0.1, 20, 2)?;
    let rel2 = (k2 - sigma_small).abs() / sigma_small;

    let k4 = moment_oracle(&g, &small, 0.1, 20, 4)?;
    let w4 = window_expectation(&g, &small, 1e5, 0.1, 20, 4)?.value;
    let rel4 = (k4 - w4).abs() / w4.abs();

    let big = sieve_gaussian_ideals(1_000_000)?;
    let sigma_big = sigma_sq_truncated(&g, &big, 1e-3, 1_000_000)?;
    let k2_big = moment_oracle(&g, &big, 1e-3, 1_000_000, 2)?;
    let rel2_big = (k2_big - sigma_big).abs() / sigma_big;
    let mu4 = moment_oracle(&g, &big, 1e-3, 1_000_000, 4)? / (sigma_big * sigma_big);

    let ok = rel2 <= 1e-12 && rel2_big <= 1e-12 && rel4 <= 1e-3 && (2.4..=3.6).contains(&mu4);
    Ok((
        ok,
        format!(
            "k=2 vs sigma^2: {rel2:.1e} (N=20), {rel2_big:.1e} (N=1e6); k=4 vs window at X=1e5: {rel4:.2e}; k=4 / sigma^4 at delta=1e-3, N=1e6: {mu4:.4}"
        ),
    ))
}

fn a9_main_term(_: &Thresholds) -> Result<(bool, String)> {
    let p = main_term_polynomial(&zeta_laurent(1)?.pow(2))?;
    let expected = [2.0 * EULER_GAMMA - 1.0, 1.0];
    let c = p.coeffs();
    let coeff_err = (0..c.len().max(2))
        .map(|i| (c.get(i).copied().unwrap_or(0.0) - expected.get(i).copied().unwrap_or(0.0)).abs())
        .fold(0.0, f64::max);
    let mut worst: f64 = 0.0;
    for t in random_points(0xA9, 20, 100_000_000) {
        let tf = t as f64;
        let err = (summatory_tau2_hyperbola(t) as f64 - tf * p.eval(tf.ln())).abs();
        worst = worst.max(err / (5.0 * tf.powf(0.6)));
    }
    Ok((
        coeff_err <= 1e-10 && worst <= 1.0,
        format!("coefficient error {coeff_err:.1e}; worst |S(T) - T P(ln T)| / (5 T^0.6) = {worst:.3e}"),
    ))
}

/// floor(n^{1/m} 2^BITS) as a signed integer.
fn fixed_point_root(n: u64, m: u32, bits: u32) -> BigInt {
    BigInt::from_biguint(Sign::Plus, (BigUint::from(n) << (bits * m) as usize).nth_root(m))
}

fn a10_exactness(_: &Thresholds) -> Result<(bool, String)> {
    // gaussian moments against k!/(2^{k/2}(k/2)!) in exact integers
    let mut moments_ok = true;
    for k in 0..=30u32 {
        let expected = if k % 2 == 1 {
            0.0
        } else {
            let fact = |n: u32| (1..=n as u128).product::<u128>();
            (fact(k) / (fact(k / 2) << (k / 2))) as f64
        };
        moments_ok &= gaussian_moment(k) == expected;
    }

    let mut kernel_ok = true;
    for m in [2u32, 3] {
        for n in 1..=100_000u64 {
            let kd = powerfree_kernel(n, m)?;
            let mut d = 2u64;
            let mut free = true;
            while d.pow(m) <= kd.q {
                if kd.q % d.pow(m) == 0 {
                    free = false;
                    break;
                }
                d += 1;
            }
            kernel_ok &= free && kd.q * kd.r.pow(m) == n;
        }
    }

    // exact zero <=> |sum| < 1e-50 at 256 fractional bits
    const BITS: u32 = 256;
    let tiny = BigInt::from(1u8) << (BITS - 166) as usize;
    let mut zero_ok = true;
    let mut compared = 0u64;
    for m in [2u32, 3] {
        let roots: Vec<BigInt> = (0..=10u64).map(|n| fixed_point_root(n, m, BITS)).collect();
        for k in 1..=3usize {
            let total = 20usize.pow(k as u32);
            for code in 0..total {
                let mut c = code;
                let mut ns = Vec::with_capacity(k);
                let mut eps = Vec::with_capacity(k);
                let mut sum = BigInt::from(0u8);
                for _ in 0..k {
                    let n = (c % 10) as u64 + 1;
                    let e: i8 = if (c / 10) % 2 == 0 { 1 } else { -1 };
                    c /= 20;
                    if e > 0 {
                        sum += &roots[n as usize];
                    } else {
                        sum -= &roots[n as usize];
                    }
                    ns.push(n);
                    eps.push(e);
                }
                let numeric_zero = sum.magnitude() < tiny.magnitude();
                zero_ok &= is_zero_alternating(m, &ns, &eps)? == numeric_zero;
                compared += 1;
            }
        }
    }
    Ok((
        moments_ok && kernel_ok && zero_ok,
        format!(
            "gaussian_moment k<=30: {moments_ok}; powerfree_kernel n<=1e5, m=2,3: {kernel_ok}; is_zero_alternating vs 256-bit over {compared} tuples: {zero_ok}"
        ),
    ))
}
