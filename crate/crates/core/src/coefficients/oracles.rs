//! Exact summatory functions S(T) = sum_{n<=T} lambda(n) that bypass the table.

use std::fmt;

use super::CoefficientTable;
use crate::error::{Error, Result};
use crate::lfun::{Builtin, LFunctionDescriptor};
use crate::numeric::intmath::{icbrt, isqrt};

/// A rational with denominator 4, stored as its numerator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QuarterInteger(pub i128);

impl QuarterInteger {
    pub fn to_f64(self) -> f64 {
        self.0 as f64 / 4.0
    }
}

impl fmt::Display for QuarterInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 4 == 0 {
            write!(f, "{}", self.0 / 4)
        } else {
            write!(f, "{}/4", self.0)
        }
    }
}

/// sum_{n<=T} tau_2(n) = 2 sum_{d<=sqrt T} floor(T/d) - floor(sqrt T)^2.
pub fn summatory_tau2_hyperbola(t: u64) -> u128 {
    let s = isqrt(t);
    let mut acc: u128 = 0;
    for d in 1..=s {
        acc += (t / d) as u128;
    }
    2 * acc - (s as u128) * (s as u128)
}

/// Number of (a, b) in Z^2 with a^2 + b^2 <= T, origin included.
///
/// Walks b = floor(sqrt(T - a^2)) downward as a grows, so the whole count
/// costs O(sqrt T) integer steps after one exact square root.
pub fn lattice_points_in_disc(t: u64) -> u128 {
    let big_a = isqrt(t);
    let mut b = big_a;
    let mut half: u128 = 0; // sum over a = 1..=A of (2 b_a + 1)
    for a in 1..=big_a {
        let r = t - a * a;
        while b * b > r {
            b -= 1;
        }
        half += 2 * b as u128 + 1;
    }
    (2 * big_a as u128 + 1) + 2 * half
}

/// Number of (a, b) in Z^2 with T0 < a^2 + b^2 <= T1, in one pass over a
/// with both boundary walks moving together.
pub fn lattice_points_in_annulus(t0: u64, t1: u64) -> u128 {
    if t1 <= t0 {
        return 0;
    }
    let big_a = isqrt(t1);
    let mut b1 = big_a;
    // b0 = floor(sqrt(t0 - a^2)) while a^2 <= t0; None once the inner disc is left
    let mut b0 = Some(isqrt(t0));
    let axis = |b1: u64, b0: Option<u64>| -> u128 {
        let outer = 2 * b1 as u128 + 1;
        let inner = b0.map_or(0, |b| 2 * b as u128 + 1);
        outer - inner
    };
    let mut total = axis(b1, b0);
    for a in 1..=big_a {
        let aa = a * a;
        let r1 = t1 - aa;
        while b1 * b1 > r1 {
            b1 -= 1;
        }
        if let Some(mut b) = b0 {
            if aa > t0 {
                b0 = None;
            } else {
                let r0 = t0 - aa;
                while b * b > r0 {
                    b -= 1;
                }
                b0 = Some(b);
            }
        }
        total += 2 * axis(b1, b0);
    }
    total
}

/// sum_{n<=T} r_2(n) / 4, i.e. the Gaussian ideal count of norm at most T.
pub fn summatory_gaussian_exact(t: u64) -> QuarterInteger {
    QuarterInteger(lattice_points_in_disc(t) as i128 - 1)
}

/// sum_{n<=T} tau_3(n) by inclusion-exclusion over the corners of the cube
/// [1, u]^3 with u = floor(T^{1/3}):
/// 3 sum_{a<=u} D_2(T/a) - 3 sum_{a,b<=u} floor(T/(ab)) + u^3.
pub fn summatory_tau3_hyperbola(t: u64) -> u128 {
    let u = icbrt(t);
    let mut single: u128 = 0;
    let mut double: u128 = 0;
    for a in 1..=u {
        let ta = t / a;
        single += summatory_tau2_hyperbola(ta);
        for b in 1..=u {
            double += (ta / b) as u128;
        }
    }
    3 * single - 3 * double + (u as u128).pow(3)
}

/// Fastest exact route to S(T) available for a descriptor.
#[derive(Clone, Copy, Debug)]
pub enum Summatory<'a> {
    Tau2,
    Tau3,
    /// r_2 sums divided by `denominator` (4 for ideal counts, 1 for lattice points).
    Gaussian { denominator: u32 },
    Table(&'a CoefficientTable),
}

impl<'a> Summatory<'a> {
    /// Picks a closed-form oracle when the descriptor has one, otherwise the table.
    pub fn for_descriptor(d: &LFunctionDescriptor, table: Option<&'a CoefficientTable>) -> Result<Self> {
        match d.id.parse::<Builtin>() {
            Ok(Builtin::TauK(2)) => Ok(Summatory::Tau2),
            Ok(Builtin::TauK(3)) => Ok(Summatory::Tau3),
            Ok(Builtin::GaussianIdeals) => Ok(Summatory::Gaussian { denominator: 4 }),
            Ok(Builtin::GaussianLattice) => Ok(Summatory::Gaussian { denominator: 1 }),
            _ => table.map(Summatory::Table).ok_or_else(|| {
                Error::InvalidParameter(format!("no exact oracle or table for `{}`", d.id))
            }),
        }
    }

    /// Largest T the route can handle.
    pub fn limit(&self) -> f64 {
        match self {
            Summatory::Table(t) => t.n_max as f64,
            _ => (1u64 << 62) as f64,
        }
    }

    /// S(T) for integer T.
    pub fn at(&self, t: u64) -> Result<f64> {
        if t as f64 > self.limit() {
            return Err(Error::OutOfRange {
                t: t as f64,
                limit: self.limit(),
            });
        }
        Ok(match self {
            Summatory::Tau2 => summatory_tau2_hyperbola(t) as f64,
            Summatory::Tau3 => summatory_tau3_hyperbola(t) as f64,
            Summatory::Gaussian { denominator } => {
                (lattice_points_in_disc(t) as i128 - 1) as f64 / *denominator as f64
            }
            Summatory::Table(table) => table.prefix_lambda_at(t as usize),
        })
    }

    /// S(T1) - S(T0), exact before the final conversion when an
    /// integer route exists.
    pub fn between(&self, t0: u64, t1: u64) -> Result<f64> {
        if t1 as f64 > self.limit() {
            return Err(Error::OutOfRange {
                t: t1 as f64,
                limit: self.limit(),
            });
        }
        Ok(match self {
            Summatory::Tau2 => (summatory_tau2_hyperbola(t1) as i128 - summatory_tau2_hyperbola(t0) as i128) as f64,
            Summatory::Tau3 => (summatory_tau3_hyperbola(t1) as i128 - summatory_tau3_hyperbola(t0) as i128) as f64,
            Summatory::Gaussian { denominator } => {
                if t1 >= t0 {
                    lattice_points_in_annulus(t0, t1) as f64 / *denominator as f64
                } else {
                    -(lattice_points_in_annulus(t1, t0) as f64) / *denominator as f64
                }
            }
            Summatory::Table(table) => match (table.summatory_exact_scaled(t0 as usize), table.summatory_exact_scaled(t1 as usize)) {
                (Some(a), Some(b)) => (b - a) as f64 / table.exact_scale().unwrap_or(1) as f64,
                _ => table.prefix_lambda_at(t1 as usize) - table.prefix_lambda_at(t0 as usize),
            },
        })
    }
}
