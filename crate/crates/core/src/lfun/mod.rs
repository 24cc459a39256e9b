//! L-function descriptors and the residue main term.

mod descriptor;
mod laurent;
mod main_term;
mod stieltjes;

pub use descriptor::{builtin_descriptor, reduce_angle, voronoi_phase, Builtin, LFunctionDescriptor, RsConstant};
pub use laurent::LaurentSeries;
pub use main_term::{main_term_polynomial, Polynomial};
pub use stieltjes::{bernoulli_even, stieltjes_constants, stieltjes_euler_maclaurin, STIELTJES_COUNT};

use crate::error::{Error, Result};

/// Laurent expansion of zeta(s) at s = 1 through (s-1)^q:
/// 1/(s-1) + sum_{n<=q} (-1)^n gamma_n (s-1)^n / n!.
pub fn zeta_laurent(q: usize) -> Result<LaurentSeries> {
    let gammas = stieltjes_constants()?;
    if q >= STIELTJES_COUNT {
        return Err(Error::StieltjesOrder {
            requested: q,
            available: STIELTJES_COUNT - 1,
        });
    }
    let mut coeffs = vec![1.0];
    let mut fact = 1.0;
    for (n, g) in gammas.iter().enumerate().take(q + 1) {
        if n > 0 {
            fact *= n as f64;
        }
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        coeffs.push(sign * g / fact);
    }
    Ok(LaurentSeries::new(-1, coeffs))
}

/// L(1, chi_{-4}) = 1 - 1/3 + 1/5 - ... by Cohen-Villegas-Zagier acceleration.
pub fn dirichlet_beta_one() -> f64 {
    const N: usize = 40;
    let d = (3.0 + 8f64.sqrt()).powi(N as i32);
    let d = (d + 1.0 / d) / 2.0;
    let mut b = -1.0;
    let mut c = -d;
    let mut s = 0.0;
    for k in 0..N {
        c = b - c;
        s += c / (2 * k + 1) as f64;
        b = (k as f64 + N as f64) * (k as f64 - N as f64) * b / ((k as f64 + 0.5) * (k as f64 + 1.0));
    }
    s / d
}
