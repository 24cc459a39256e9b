use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::coefficients::CoefficientTable;
use crate::error::{Error, Result};
use crate::lfun::LFunctionDescriptor;
use crate::numeric::quadrature::{adaptive, GaussLegendre};
use crate::numeric::CompensatedSum;
use crate::voronoi::DualKernel;

/// Unit-mass bump C exp(-1/((t - 1/2)(5/2 - t))) on (1/2, 5/2).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WindowW {
    pub c: f64,
}

pub const SUPPORT: (f64, f64) = (0.5, 2.5);

fn bump(t: f64) -> f64 {
    if t <= SUPPORT.0 || t >= SUPPORT.1 {
        return 0.0;
    }
    (-1.0 / ((t - SUPPORT.0) * (SUPPORT.1 - t))).exp()
}

impl WindowW {
    pub fn new() -> Result<Self> {
        let mass = adaptive(bump, SUPPORT.0, SUPPORT.1, 1e-15, 40)?;
        Ok(WindowW { c: 1.0 / mass })
    }

    #[inline]
    pub fn eval(&self, t: f64) -> f64 {
        self.c * bump(t)
    }
}

/// Largest power accepted by `window_expectation`.
pub const MAX_POWER: u32 = 6;
const TARGET: f64 = 1e-9;
const MAX_REFINEMENTS: u32 = 4;

/// Windowed expectation and how it was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WindowResult {
    pub value: f64,
    /// |Q16 - Q12| over the same panels.
    pub error_estimate: f64,
    /// Natural scale sigma(delta; N)^k the error is measured against.
    pub scale: f64,
    pub panels: usize,
    pub nodes: usize,
}

/// (1/X) int Delta(x, delta; N)^k W(x/X) dx = int Delta(X t, delta; N)^k W(t) dt.
///
/// Panels in t have width 1/(X k breve_N), one oscillation of the fastest
/// component of Delta^k, and carry 12- and 16-point Gauss-Legendre rules;
/// the panel count doubles until the two rules agree to 1e-9 of sigma^k.
pub fn window_expectation(
    d: &LFunctionDescriptor,
    table: &CoefficientTable,
    x_base: f64,
    delta: f64,
    n: usize,
    k: u32,
) -> Result<WindowResult> {
    if k > MAX_POWER {
        return Err(Error::InvalidParameter(format!("power {k} exceeds {MAX_POWER}")));
    }
    if !(x_base > 0.0) {
        return Err(Error::InvalidParameter(format!("X = {x_base} must be positive")));
    }
    let window = WindowW::new()?;
    let kernel = DualKernel::new(d, table, n)?;
    let coeffs: Vec<f64> = kernel
        .breve()
        .iter()
        .zip(kernel.amplitudes())
        .map(|(b, a)| 2.0 * d.w as f64 / PI * a * (PI * b.to_f64() * delta).sin())
        .collect();
    let sigma_sq: f64 = coeffs.iter().map(|c| c * c / 2.0).sum();
    let scale = sigma_sq.sqrt().powi(k as i32);
    if k == 0 {
        return Ok(WindowResult {
            value: 1.0,
            error_estimate: 0.0,
            scale: 1.0,
            panels: 0,
            nodes: 0,
        });
    }
    if sigma_sq == 0.0 {
        return Ok(WindowResult {
            value: 0.0,
            error_estimate: 0.0,
            scale: 0.0,
            panels: 0,
            nodes: 0,
        });
    }
    let oscillations = (SUPPORT.1 - SUPPORT.0) * x_base * k as f64 * kernel.top_frequency();
    let mut panels = (oscillations.ceil() as usize).max(64);
    let (g12, g16) = (GaussLegendre::new(12), GaussLegendre::new(16));
    let mut achieved = f64::INFINITY;
    for _ in 0..=MAX_REFINEMENTS {
        let (q12, q16) = integrate_panels(&kernel, &coeffs, d.phi, delta, x_base, k, panels, &window, &g12, &g16);
        let err = (q16 - q12).abs();
        achieved = err / scale;
        if err <= TARGET * scale.max(q16.abs()) {
            return Ok(WindowResult {
                value: q16,
                error_estimate: err,
                scale,
                panels,
                nodes: panels * 28,
            });
        }
        panels *= 2;
    }
    Err(Error::Quadrature { achieved })
}

/// Both rules over `panels` equal panels of the support.
#[allow(clippy::too_many_arguments)]
fn integrate_panels(
    kernel: &DualKernel,
    coeffs: &[f64],
    phi: f64,
    delta: f64,
    x_base: f64,
    k: u32,
    panels: usize,
    window: &WindowW,
    g12: &GaussLegendre,
    g16: &GaussLegendre,
) -> (f64, f64) {
    let h = (SUPPORT.1 - SUPPORT.0) / panels as f64;
    // node offsets within a panel, in t, for both rules
    let offsets: Vec<f64> = g12
        .nodes
        .iter()
        .chain(&g16.nodes)
        .map(|xi| 0.5 * h * (1.0 + xi))
        .collect();
    let weights: Vec<f64> = g12
        .weights
        .iter()
        .chain(&g16.weights)
        .map(|w| 0.5 * h * w)
        .collect();
    let split = g12.nodes.len();
    let nn = offsets.len();
    // rotation by 2 pi breve X offset for every (term, node)
    let rot: Vec<(f64, f64)> = kernel
        .breve()
        .iter()
        .flat_map(|b| {
            let bf = b.to_f64();
            offsets.iter().map(move |o| (2.0 * PI * bf * x_base * o).sin_cos())
        })
        .collect();
    let mut s12 = CompensatedSum::new();
    let mut s16 = CompensatedSum::new();
    let mut vals = vec![0.0; nn];
    for p in 0..panels {
        let t0 = SUPPORT.0 + p as f64 * h;
        let x0 = x_base * t0;
        vals.iter_mut().for_each(|v| *v = 0.0);
        for (i, (b, c)) in kernel.breve().iter().zip(coeffs).enumerate() {
            let base = 2.0 * PI * (b.mul_f64(x0) + b.mul_f64(0.5 * delta)).frac() + phi;
            let (sb, cb) = base.sin_cos();
            let r = &rot[i * nn..(i + 1) * nn];
            for (v, &(sr, cr)) in vals.iter_mut().zip(r) {
                *v += c * (cb * cr - sb * sr);
            }
        }
        let mut p12 = 0.0;
        let mut p16 = 0.0;
        for j in 0..nn {
            let f = vals[j].powi(k as i32) * window.eval(t0 + offsets[j]) * weights[j];
            if j < split {
                p12 += f;
            } else {
                p16 += f;
            }
        }
        s12.add(p12);
        s16.add(p16);
    }
    (s12.value(), s16.value())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::sieve_gaussian_ideals;
    use crate::lfun::{builtin_descriptor, Builtin};

    #[test]
    fn window_has_unit_mass() {
        let w = WindowW::new().unwrap();
        let mass = adaptive(|t| w.eval(t), 0.5, 2.5, 1e-13, 40).unwrap();
        assert!((mass - 1.0).abs() < 1e-10);
        assert_eq!(w.eval(0.5), 0.0);
        assert_eq!(w.eval(2.6), 0.0);
        assert!(w.eval(1.5) > 0.0);
    }

    #[test]
    fn zero_table_gives_zero() {
        let g = builtin_descriptor(Builtin::GaussianIdeals).unwrap();
        let table = CoefficientTable::from_values("zero", &[0.0; 50]);
        for k in 1..=4 {
            assert_eq!(window_expectation(&g, &table, 1e3, 0.1, 50, k).unwrap().value, 0.0);
        }
    }

    #[test]
    fn agrees_with_direct_evaluation_at_small_x() {
        // brute-force composite rule on the raw delta_approx as an oracle
        let g = builtin_descriptor(Builtin::GaussianIdeals).unwrap();
        let table = sieve_gaussian_ideals(10).unwrap();
        let kernel = DualKernel::new(&g, &table, 10).unwrap();
        let w = WindowW::new().unwrap();
        let x = 50.0;
        let gl = GaussLegendre::new(20);
        let direct = gl.composite(0.5, 2.5, 2000, |t| kernel.delta_approx(x * t, 0.2).powi(2) * w.eval(t));
        let ours = window_expectation(&g, &table, x, 0.2, 10, 2).unwrap();
        assert!((ours.value - direct).abs() < 1e-11, "{ours:?} vs {direct}");
    }

    #[test]
    fn rejects_high_power() {
        let g = builtin_descriptor(Builtin::GaussianIdeals).unwrap();
        let table = sieve_gaussian_ideals(10).unwrap();
        assert!(window_expectation(&g, &table, 1e3, 0.1, 10, 7).is_err());
    }
}
