//! Truncated Laurent series about s = 1.

use serde::{Deserialize, Serialize};

/// `coeffs[i]` multiplies `(s-1)^(min_order + i)`; the series is valid through
/// order `min_order + coeffs.len() - 1`. A non-zero series is kept normalized
/// with `coeffs[0] != 0`. The zero series has no coefficients and encodes its
/// valid order as `min_order - 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LaurentSeries {
    pub min_order: i32,
    pub coeffs: Vec<f64>,
}

impl LaurentSeries {
    pub fn new(min_order: i32, coeffs: Vec<f64>) -> Self {
        let mut s = LaurentSeries { min_order, coeffs };
        s.normalize();
        s
    }

    /// Taylor series (min_order 0) with the given coefficients.
    pub fn taylor(coeffs: Vec<f64>) -> Self {
        Self::new(0, coeffs)
    }

    /// Highest order through which the coefficients are meaningful.
    pub fn valid_through(&self) -> i32 {
        self.min_order + self.coeffs.len() as i32 - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of (s-1)^order, or `None` beyond the truncation order.
    pub fn coeff(&self, order: i32) -> Option<f64> {
        if order > self.valid_through() {
            None
        } else if order < self.min_order {
            Some(0.0)
        } else {
            Some(self.coeffs[(order - self.min_order) as usize])
        }
    }

    fn normalize(&mut self) {
        let lead = self.coeffs.iter().take_while(|&&c| c == 0.0).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.min_order += lead as i32;
        }
    }

    /// Cauchy product; valid through the smaller of the two induced orders.
    pub fn mul(&self, other: &LaurentSeries) -> LaurentSeries {
        let min_order = self.min_order + other.min_order;
        let valid = (self.valid_through() + other.min_order).min(other.valid_through() + self.min_order);
        let len = (valid - min_order + 1).max(0) as usize;
        let mut coeffs = vec![0.0; len];
        for (i, c) in coeffs.iter_mut().enumerate() {
            let mut acc = 0.0;
            for j in 0..=i {
                if let (Some(a), Some(b)) = (self.coeffs.get(j), other.coeffs.get(i - j)) {
                    acc += a * b;
                }
            }
            *c = acc;
        }
        if self.is_zero() || other.is_zero() {
            return LaurentSeries {
                min_order: valid + 1,
                coeffs: Vec::new(),
            };
        }
        LaurentSeries::new(min_order, coeffs)
    }

    pub fn pow(&self, k: u32) -> LaurentSeries {
        assert!(k >= 1, "laurent pow needs k >= 1");
        let mut acc = self.clone();
        for _ in 1..k {
            acc = acc.mul(self);
        }
        acc
    }
}

impl std::fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0 + O((s-1)^{})", self.min_order);
        }
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}·(s-1)^{}", self.min_order + i as i32)?;
        }
        write!(f, " + O((s-1)^{})", self.valid_through() + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn pole_times_zero_is_one() {
        let pole = LaurentSeries::new(-1, vec![1.0]);
        let t = LaurentSeries::new(1, vec![1.0, 0.0, 0.0]);
        let p = pole.mul(&t);
        assert_eq!(p.min_order, 0);
        assert_eq!(p.coeff(0), Some(1.0));
    }

    #[test]
    fn square_of_simple_pole_binomial() {
        let g = 0.5772156649015329;
        let a = LaurentSeries::new(-1, vec![1.0, g, 0.0, 0.0]);
        let sq = a.pow(2);
        assert_eq!(sq.min_order, -2);
        assert_eq!(sq.coeff(-2), Some(1.0));
        assert!((sq.coeff(-1).unwrap() - 2.0 * g).abs() < 1e-15);
        assert!((sq.coeff(0).unwrap() - g * g).abs() < 1e-15);
        assert_eq!(sq.valid_through(), 1);
    }

    fn naive_convolution(a: &LaurentSeries, b: &LaurentSeries) -> Vec<(i32, f64)> {
        let mut out = std::collections::BTreeMap::new();
        for (i, x) in a.coeffs.iter().enumerate() {
            for (j, y) in b.coeffs.iter().enumerate() {
                let order = a.min_order + b.min_order + (i + j) as i32;
                *out.entry(order).or_insert(0.0) += x * y;
            }
        }
        out.into_iter().collect()
    }

    fn series() -> impl Strategy<Value = LaurentSeries> {
        (-3i32..3, prop::collection::vec(-2.0f64..2.0, 5)).prop_map(|(o, mut c)| {
            if c[0] == 0.0 {
                c[0] = 1.0;
            }
            LaurentSeries::new(o, c)
        })
    }

    proptest! {
        #[test]
        fn mul_matches_naive_convolution(a in series(), b in series()) {
            let p = a.mul(&b);
            let naive = naive_convolution(&a, &b);
            for (order, v) in naive {
                if let Some(c) = p.coeff(order) {
                    prop_assert!((c - v).abs() <= 1e-12 * (1.0 + v.abs()));
                }
            }
            prop_assert_eq!(p.valid_through(), a.min_order + b.min_order + 4);
        }

        #[test]
        fn mul_is_associative(a in series(), b in series(), c in series()) {
            let l = a.mul(&b).mul(&c);
            let r = a.mul(&b.mul(&c));
            prop_assert_eq!(l.valid_through(), r.valid_through());
            for order in l.min_order.min(r.min_order)..=l.valid_through() {
                let (x, y) = (l.coeff(order).unwrap(), r.coeff(order).unwrap());
                prop_assert!((x - y).abs() <= 1e-12 * (1.0 + x.abs()));
            }
        }
    }
}
