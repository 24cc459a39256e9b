use super::CoefficientTable;
use crate::error::{Error, Result};
use crate::lfun::Builtin;

/// Largest table the O(N^{3/2}) product is meant for.
pub const ETA24_MAX_N: usize = 10_000_000;

/// Ramanujan tau(1..=n) from Delta = q prod_{k>=1} (1 - q^k)^24.
///
/// The Jacobi identity prod (1 - q^k)^3 = sum_{j>=0} (-1)^j (2j+1) q^{j(j+1)/2}
/// gives a sparse series with O(sqrt n) terms; the dense accumulator is
/// multiplied by it eight times. Arithmetic is checked i128, so the table
/// reports an overflow instead of wrapping once |tau(n)| approaches 2^127.
pub fn eta24_coefficients(n: usize) -> Result<CoefficientTable> {
    if n > ETA24_MAX_N {
        return Err(Error::InvalidParameter(format!(
            "eta24 table limited to n <= {ETA24_MAX_N}, requested {n}"
        )));
    }
    let len = n; // coefficients of q^0..q^{n-1} of prod (1-q^k)^24
    let mut sparse: Vec<(usize, i128)> = Vec::new();
    for j in 0.. {
        let e = j * (j + 1) / 2;
        if e >= len {
            break;
        }
        let c = (2 * j + 1) as i128;
        sparse.push((e, if j % 2 == 0 { c } else { -c }));
    }
    let mut acc = vec![0i128; len];
    if len > 0 {
        acc[0] = 1;
    }
    for _ in 0..8 {
        for i in (0..len).rev() {
            // the j = 0 term has exponent 0 and coefficient 1
            let mut v = acc[i];
            for &(e, c) in &sparse[1..] {
                if e > i {
                    break;
                }
                let term = acc[i - e]
                    .checked_mul(c)
                    .ok_or_else(|| overflow(i + 1))?;
                v = v.checked_add(term).ok_or_else(|| overflow(i + 1))?;
            }
            acc[i] = v;
        }
    }
    let mut exact = Vec::with_capacity(n + 1);
    exact.push(0);
    exact.extend_from_slice(&acc);
    CoefficientTable::from_exact_normalized(Builtin::Ramanujan.id(), exact, |k, t| {
        t as f64 / (k as f64).powf(5.5)
    })
}

fn overflow(n: usize) -> Error {
    Error::ExactOverflow(format!("tau({n}) exceeds i128"))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// q prod (1 - q^k)^24 expanded naively term by term.
    fn naive_delta(n: usize) -> Vec<i128> {
        let mut poly = vec![0i128; n];
        poly[0] = 1;
        for k in 1..n {
            for _ in 0..24 {
                for i in (k..n).rev() {
                    poly[i] -= poly[i - k];
                }
            }
        }
        poly
    }

    #[test]
    fn first_values() {
        let t = eta24_coefficients(12).unwrap();
        let exact = t.values_exact().unwrap();
        assert_eq!(exact[0], 1);
        assert_eq!(exact[1], -24);
        assert_eq!(exact[2], 252);
        assert_eq!(exact[..12], naive_delta(12)[..]);
        assert_eq!(exact[10], 534_612);
        assert_eq!(exact[11], -370_944);
    }

    #[test]
    fn normalized_values() {
        let t = eta24_coefficients(3).unwrap();
        assert!((t.lambda(2) + 24.0 / 2f64.powf(5.5)).abs() < 1e-15);
    }

    #[test]
    fn multiplicative_and_hecke() {
        let t = eta24_coefficients(5000).unwrap();
        let tau = |n: usize| t.values_exact().unwrap()[n - 1];
        // tau(mn) = tau(m) tau(n) for coprime m, n
        assert_eq!(tau(6), tau(2) * tau(3));
        assert_eq!(tau(35 * 4), tau(35) * tau(4));
        // tau(p)^2 - tau(p^2) = p^11
        for p in [2usize, 3, 5, 7] {
            assert_eq!(tau(p) * tau(p) - tau(p * p), (p as i128).pow(11));
        }
    }

    #[test]
    fn rejects_oversized() {
        assert!(eta24_coefficients(ETA24_MAX_N + 1).is_err());
    }
}
