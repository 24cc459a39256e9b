use super::CoefficientTable;
use crate::error::{Error, Result};
use crate::lfun::Builtin;
use crate::numeric::intmath::binomial;
use crate::numeric::primes::{segmented_multiplicative, LinearSieve};

/// tau_k(p^a) = C(a + k - 1, a).
fn tau_k_local(k: u32, a: u32) -> Option<u128> {
    binomial((a + k - 1) as u64, a as u64)
}

/// r_2(p^a) / 4 for the Gaussian integers: 1 at p = 2, a + 1 at p = 1 mod 4,
/// and 1 or 0 at p = 3 mod 4 depending on the parity of a.
fn gaussian_local(p: u64, a: u32) -> i128 {
    match p % 4 {
        2 => 1,
        1 => a as i128 + 1,
        _ => a.is_multiple_of(2) as i128,
    }
}

/// tau_k(1..=n) via a smallest-prime-factor linear sieve.
pub fn sieve_tau_k(k: u32, n: usize) -> Result<CoefficientTable> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!("tau_k needs k >= 2, got {k}")));
    }
    let sieve = LinearSieve::new(n.max(1));
    let mut vals: Vec<u64> = sieve.multiplicative(1u64, |n, p, a, rest| {
        let local = tau_k_local(k, a)
            .and_then(|v| u64::try_from(v).ok())
            .ok_or(Error::Overflow { n: n as u64, p, a })?;
        rest.checked_mul(local).ok_or(Error::Overflow { n: n as u64, p, a })
    })?;
    vals.truncate(n + 1);
    let exact = vals.into_iter().map(|v| v as i128).collect();
    CoefficientTable::from_exact(Builtin::TauK(k).id(), exact, 1)
}

/// Ideal counts of Z[i]: lambda(n) = sum_{d | n} chi_{-4}(d), stored exactly as r_2(n) = 4 lambda(n).
pub fn sieve_gaussian_ideals(n: usize) -> Result<CoefficientTable> {
    gaussian_table(n, Builtin::GaussianIdeals)
}

/// Lattice-point normalisation lambda(n) = r_2(n).
pub fn sieve_gaussian_lattice(n: usize) -> Result<CoefficientTable> {
    gaussian_table(n, Builtin::GaussianLattice)
}

fn gaussian_table(n: usize, which: Builtin) -> Result<CoefficientTable> {
    let sieve = LinearSieve::new(n.max(1));
    let mut vals: Vec<i128> = sieve
        .multiplicative(1i128, |_, p, a, rest| Ok::<_, Error>(rest * gaussian_local(p, a)))?;
    vals.truncate(n + 1);
    for v in vals.iter_mut().skip(1) {
        *v *= 4;
    }
    let scale = if which == Builtin::GaussianLattice { 1 } else { 4 };
    CoefficientTable::from_exact(which.id(), vals, scale)
}

/// Streams lambda(n)^2 for n <= n_max in blocks, for the built-ins whose
/// coefficients are cheap to sieve (tau_k and the Gaussian families).
pub fn stream_lambda_squared<G>(which: Builtin, n_max: u64, visit: G) -> Result<()>
where
    G: FnMut(u64, &[f64]),
{
    const BLOCK: usize = 1 << 16;
    match which {
        Builtin::TauK(k) => {
            segmented_multiplicative(
                n_max,
                BLOCK,
                |_, a| {
                    let v = tau_k_local(k, a).unwrap_or(u128::MAX) as f64;
                    v * v
                },
                visit,
            );
            Ok(())
        }
        Builtin::GaussianIdeals | Builtin::GaussianLattice => {
            let scale = if which == Builtin::GaussianLattice { 16.0 } else { 1.0 };
            let mut visit = visit;
            segmented_multiplicative(
                n_max,
                BLOCK,
                |p, a| {
                    let v = gaussian_local(p, a) as f64;
                    v * v
                },
                |start, vals| {
                    if scale == 1.0 {
                        visit(start, vals);
                    } else {
                        let scaled: Vec<f64> = vals.iter().map(|v| v * scale).collect();
                        visit(start, &scaled);
                    }
                },
            );
            Ok(())
        }
        Builtin::Ramanujan => Err(Error::InvalidParameter(
            "streaming squares are only available for sieve-friendly families".into(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tau_values() {
        let t2 = sieve_tau_k(2, 10).unwrap();
        assert_eq!(t2.lambda(6), 4.0);
        let t3 = sieve_tau_k(3, 8).unwrap();
        assert_eq!(t3.lambda(1), 1.0);
        // ordered triples with product 8
        let brute = (1..=8)
            .flat_map(|a| (1..=8).map(move |b| (a, b)))
            .filter(|(a, b)| 8 % (a * b) == 0)
            .count();
        assert_eq!(t3.lambda(8), brute as f64);
        assert_eq!(brute, 10);
    }

    #[test]
    fn gaussian_values() {
        let g = sieve_gaussian_ideals(50).unwrap();
        assert_eq!(g.lambda(1), 1.0);
        assert_eq!(g.lambda(3), 0.0);
        assert_eq!(g.lambda(5), 2.0);
        // against the divisor-sum definition
        for n in 1..=50 {
            let chi: i32 = (1..=n)
                .filter(|d| n % d == 0)
                .map(|d| match d % 4 {
                    1 => 1,
                    3 => -1,
                    _ => 0,
                })
                .sum();
            assert_eq!(g.lambda(n as usize), chi as f64, "n = {n}");
        }
        assert_eq!(g.values_exact().unwrap()[4], 8);
    }

    #[test]
    fn tau_k_overflow_reported() {
        // tau_1000(2^a) = C(a + 999, a) leaves u64 long before 2^20
        let err = sieve_tau_k(1000, 1 << 20).unwrap_err();
        assert!(matches!(err, Error::Overflow { .. }));
    }

    #[test]
    fn streaming_squares_match_table() {
        for which in [Builtin::TauK(3), Builtin::GaussianIdeals] {
            let table = match which {
                Builtin::TauK(k) => sieve_tau_k(k, 3000).unwrap(),
                _ => sieve_gaussian_ideals(3000).unwrap(),
            };
            let mut total = 0.0;
            stream_lambda_squared(which, 3000, |_, vals| total += vals.iter().sum::<f64>()).unwrap();
            assert_eq!(total, table.sum_sq_through(3000));
        }
    }
}
