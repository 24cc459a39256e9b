use serde::{Deserialize, Serialize};

use super::LaurentSeries;
use crate::error::{Error, Result};

/// Real polynomial, coefficients lowest degree first.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Polynomial(Vec<f64>);

impl Polynomial {
    pub fn new(coeffs: Vec<f64>) -> Self {
        Polynomial(coeffs).trimmed()
    }

    pub fn zero() -> Self {
        Polynomial(Vec::new())
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0.0)
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.iter().rposition(|&c| c != 0.0)
    }

    pub fn trimmed(mut self) -> Self {
        while self.0.last() == Some(&0.0) {
            self.0.pop();
        }
        self
    }

    pub fn eval(&self, u: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, c| acc * u + c)
    }
}

/// P with Res_{s=1} L(s) y^s/s = y P(ln y), from the Laurent expansion of L at s = 1.
///
/// With t = s - 1 and u = ln y, y^s/s = y * (sum_j u^j t^j / j!) * (sum_i (-1)^i t^i),
/// so the t^-1 coefficient of L(s) y^s / s is y * sum_l L_{-1-l} sum_{j<=l} (-1)^{l-j} u^j / j!.
pub fn main_term_polynomial(series: &LaurentSeries) -> Result<Polynomial> {
    if series.is_zero() || series.min_order >= 0 {
        return Ok(Polynomial::zero());
    }
    let pole = (-series.min_order) as usize;
    if series.valid_through() < -1 {
        return Err(Error::Truncation {
            need: -1,
            have: series.valid_through(),
        });
    }
    let mut coeffs = vec![0.0; pole];
    for l in 0..pole {
        let lc = series.coeff(-1 - l as i32).unwrap_or(0.0);
        let mut fact = 1.0;
        for (j, c) in coeffs.iter_mut().enumerate().take(l + 1) {
            if j > 0 {
                fact *= j as f64;
            }
            let sign = if (l - j) % 2 == 0 { 1.0 } else { -1.0 };
            *c += lc * sign / fact;
        }
    }
    Ok(Polynomial::new(coeffs))
}
