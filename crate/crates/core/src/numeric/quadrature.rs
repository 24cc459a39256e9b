//! Gauss-Legendre rules, composite panels and a simple adaptive driver.

use crate::error::{Error, Result};

/// Gauss-Legendre nodes and weights on [-1, 1].
#[derive(Clone, Debug)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            // Tricomi initial guess, then Newton on P_n
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GaussLegendre { nodes, weights }
    }

    /// Integral of f over [a, b].
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(mid + half * x);
        }
        acc * half
    }

    /// Composite rule over `panels` equal panels.
    pub fn composite<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, panels: usize, mut f: F) -> f64 {
        let h = (b - a) / panels as f64;
        let mut acc = crate::numeric::CompensatedSum::new();
        for j in 0..panels {
            let lo = a + h * j as f64;
            acc.add(self.integrate(lo, lo + h, &mut f));
        }
        acc.value()
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Adaptive bisection comparing an n-point rule with its 2n-point refinement.
/// Stops on an interval when the two agree within `abs_tol` scaled by the
/// interval's share of the whole.
pub fn adaptive<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, abs_tol: f64, max_depth: u32) -> Result<f64> {
    let coarse = GaussLegendre::new(10);
    let fine = GaussLegendre::new(20);
    let mut total = 0.0;
    let mut worst: f64 = 0.0;
    let mut stack = vec![(a, b, 0u32)];
    while let Some((lo, hi, depth)) = stack.pop() {
        let c = coarse.integrate(lo, hi, &f);
        let r = fine.integrate(lo, hi, &f);
        let err = (r - c).abs();
        let allowed = abs_tol * (hi - lo) / (b - a);
        if err <= allowed || depth >= max_depth {
            if err > allowed {
                worst = worst.max(err / allowed.max(f64::MIN_POSITIVE));
            }
            total += r;
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((mid, hi, depth + 1));
            stack.push((lo, mid, depth + 1));
        }
    }
    if worst > 1.0 {
        return Err(Error::Quadrature {
            achieved: worst * abs_tol / total.abs().max(f64::MIN_POSITIVE),
        });
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_for_polynomials() {
        let gl = GaussLegendre::new(5);
        // degree 9 is integrated exactly by 5 points
        let v = gl.integrate(0.0, 2.0, |x| x.powi(9));
        assert!((v - 102.4).abs() < 1e-12);
        let s: f64 = gl.weights.iter().sum();
        assert!((s - 2.0).abs() < 1e-14);
    }

    #[test]
    fn adaptive_handles_peaks() {
        let v = adaptive(|x| 1.0 / (1e-4 + x * x), -1.0, 1.0, 1e-10, 60).unwrap();
        let exact = 2.0 * (1.0f64 / 1e-2).atan() / 1e-2;
        assert!((v - exact).abs() / exact < 1e-10);
    }

    #[test]
    fn composite_oscillatory() {
        let gl = GaussLegendre::new(16);
        let v = gl.composite(0.0, 100.0, 400, |x| (3.0 * x).cos());
        assert!((v - (300.0f64).sin() / 3.0).abs() < 1e-12);
    }
}
