//! Double-double arithmetic (an unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`).
//!
//! Only the handful of operations needed for phase reduction are provided:
//! the dual-sum frequencies `m (n/D)^{1/m}` times a sample point reach 1e12
//! and beyond, and the fractional part has to survive with ~1e-16 absolute
//! accuracy.

use std::ops::{Add, Mul, Neg, Sub};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

    #[inline]
    pub fn new(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    /// Exact sum of two doubles.
    #[inline]
    pub fn sum(a: f64, b: f64) -> Self {
        let (hi, lo) = two_sum(a, b);
        Dd { hi, lo }
    }

    /// Exact product of two doubles.
    #[inline]
    pub fn prod(a: f64, b: f64) -> Self {
        let (hi, lo) = two_prod(a, b);
        Dd { hi, lo }
    }

    /// Exactly represented integer (|n| < 2^106).
    pub fn from_i128(n: i128) -> Self {
        let hi = n as f64;
        let rest = n - hi as i128;
        let (hi, lo) = quick_two_sum(hi, rest as f64);
        Dd { hi, lo }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn mul_f64(self, b: f64) -> Self {
        let (p, e) = two_prod(self.hi, b);
        let (hi, lo) = quick_two_sum(p, e + self.lo * b);
        Dd { hi, lo }
    }

    pub fn div(self, y: Dd) -> Self {
        let q1 = self.hi / y.hi;
        let r = self - y.mul_f64(q1);
        let q2 = r.hi / y.hi;
        let r = r - y.mul_f64(q2);
        let q3 = r.hi / y.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo } + Dd::new(q3)
    }

    pub fn powi(self, k: u32) -> Self {
        let mut acc = Dd::new(1.0);
        for _ in 0..k {
            acc = acc * self;
        }
        acc
    }

    /// Positive real m-th root by two Newton steps from the f64 estimate.
    pub fn nth_root(self, m: u32) -> Self {
        assert!(self.hi >= 0.0, "nth_root of a negative number");
        if self.hi == 0.0 {
            return Dd::ZERO;
        }
        if m == 1 {
            return self;
        }
        let mut y = Dd::new(self.hi.powf(1.0 / m as f64));
        for _ in 0..2 {
            let ym1 = y.powi(m - 1);
            let resid = self - ym1 * y;
            y = y + resid.div(ym1.mul_f64(m as f64));
        }
        y
    }

    /// Fractional part in [0, 1), rounded to double.
    pub fn frac(self) -> f64 {
        let fl = self.hi.floor();
        let (s, e) = two_sum(self.hi - fl, self.lo);
        let mut r = s + e;
        // `hi` may sit exactly on an integer with a negative `lo`
        if r < 0.0 {
            r += 1.0;
        }
        if r >= 1.0 {
            r -= 1.0;
        }
        r
    }
}

impl Add for Dd {
    type Output = Dd;
    #[inline]
    fn add(self, y: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, y.hi);
        let (t, f) = two_sum(self.lo, y.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Dd { hi, lo }
    }
}

impl Sub for Dd {
    type Output = Dd;
    #[inline]
    fn sub(self, y: Dd) -> Dd {
        self + (-y)
    }
}

impl Neg for Dd {
    type Output = Dd;
    #[inline]
    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Mul for Dd {
    type Output = Dd;
    #[inline]
    fn mul(self, y: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, y.hi);
        let e = e + (self.hi * y.lo + self.lo * y.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }
}
