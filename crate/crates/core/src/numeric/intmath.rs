//! Exact integer roots and floors.
//!
//! Every lattice-point and hyperbola oracle depends on these being exact;
//! a floating square root that lands one unit low drops boundary points.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

/// floor(sqrt(n)).
#[inline]
pub fn isqrt(n: u64) -> u64 {
    n.isqrt()
}

/// floor(n^(1/m)) by floating estimate followed by integer correction.
pub fn iroot(n: u64, m: u32) -> u64 {
    assert!(m >= 1);
    match (n, m) {
        (0, _) => return 0,
        (_, 1) => return n,
        (_, 2) => return isqrt(n),
        _ => {}
    }
    let mut r = (n as f64).powf(1.0 / m as f64).round() as u64;
    // (r+1)^m <= n  means r is too small; r^m > n  means too large
    while pow_le(r + 1, m, n) {
        r += 1;
    }
    while r > 0 && !pow_le(r, m, n) {
        r -= 1;
    }
    r
}

/// floor(cbrt(n)).
#[inline]
pub fn icbrt(n: u64) -> u64 {
    iroot(n, 3)
}

/// Whether base^m <= n, without overflow.
fn pow_le(base: u64, m: u32, n: u64) -> bool {
    let mut acc: u128 = 1;
    for _ in 0..m {
        acc *= base as u128;
        if acc > n as u128 {
            return false;
        }
    }
    true
}

/// floor(x^m) for a finite non-negative double, computed exactly from the
/// binary representation. Returns `None` when the result exceeds u128.
pub fn floor_pow(x: f64, m: u32) -> Option<u128> {
    assert!(x.is_finite() && x >= 0.0, "floor_pow needs finite x >= 0");
    if x == 0.0 {
        return Some(0);
    }
    let (mant, exp) = decompose(x);
    let big = BigUint::from(mant).pow(m);
    let shift = exp as i64 * m as i64;
    let v = if shift >= 0 {
        big << (shift as usize)
    } else {
        big >> ((-shift) as usize)
    };
    if v.is_zero() {
        Some(0)
    } else {
        v.to_u128()
    }
}

/// x = mant * 2^exp with integer mant.
pub fn decompose(x: f64) -> (u64, i32) {
    let bits = x.to_bits();
    let exp_bits = ((bits >> 52) & 0x7ff) as i32;
    let frac = bits & ((1u64 << 52) - 1);
    if exp_bits == 0 {
        (frac, -1074)
    } else {
        (frac | (1u64 << 52), exp_bits - 1075)
    }
}

/// Binomial coefficient C(n, k) in u128 with overflow check.
pub fn binomial(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    Some(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn roots_at_perfect_powers() {
        assert_eq!(iroot(64, 3), 4);
        assert_eq!(iroot(63, 3), 3);
        assert_eq!(iroot(u64::MAX, 2), 4_294_967_295);
        assert_eq!(iroot(u64::MAX, 3), 2_642_245);
        assert_eq!(iroot(1 << 60, 5), 1 << 12);
    }

    #[test]
    fn floor_pow_exact() {
        assert_eq!(floor_pow(2.5, 2), Some(6));
        assert_eq!(floor_pow(100.5, 2), Some(10100));
        assert_eq!(floor_pow(3.0, 3), Some(27));
        assert_eq!(floor_pow(0.999, 4), Some(0));
        // 1e6 + 0.02 is not exact in binary; check against its exact value
        let x = 1e6 + 0.02;
        let (mant, exp) = decompose(x);
        assert_eq!((mant as f64) * 2f64.powi(exp), x);
        assert_eq!(floor_pow(x, 2), Some(1_000_000_040_000));
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), Some(10));
        assert_eq!(binomial(10, 0), Some(1));
        assert_eq!(binomial(3, 5), Some(0));
    }

    proptest! {
        #[test]
        fn iroot_brackets(n in 0u64..u64::MAX, m in 2u32..7) {
            let r = iroot(n, m) as u128;
            prop_assert!(r.pow(m) <= n as u128);
            prop_assert!((r + 1).pow(m) > n as u128);
        }
    }
}
