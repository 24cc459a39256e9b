//! m-th-power-free kernels, exact zero detection for sums of m-th roots,
//! the Galois lower bound, and the diagonal moment oracle.
//!
//! A sum sum_j eps_j n_j^{1/m} vanishes iff, after writing n_j = q_j r_j^m with
//! q_j m-th-power-free, the signed sum of r_j vanishes inside every q-group
//! (the roots q^{1/m} of distinct kernels are linearly independent over Q).

use std::f64::consts::PI;
use std::io::Write;
use std::path::Path;

use log::warn;
use num_bigint::{BigInt, BigUint, Sign};
use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coefficients::CoefficientTable;
use crate::error::{Error, Result};
use crate::lfun::LFunctionDescriptor;
use crate::numeric::intmath::iroot;
use crate::numeric::primes::LinearSieve;
use crate::numeric::CompensatedSum;

/// Largest n factorised by trial division.
pub const FACTOR_BUDGET: u64 = 1_000_000_000_000;

/// Default ceiling on (2N)^k tuple checks.
pub const DEFAULT_TUPLE_BUDGET: u64 = 1_000_000_000;

/// n = q r^m with q m-th-power-free.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct KernelDecomposition {
    pub n: u64,
    pub m: u32,
    pub q: u64,
    pub r: u64,
}

/// Splits n into its m-th-power-free part and m-th-power part by trial division.
pub fn powerfree_kernel(n: u64, m: u32) -> Result<KernelDecomposition> {
    if n == 0 || m < 2 {
        return Err(Error::InvalidParameter(format!("kernel needs n >= 1 and m >= 2, got n = {n}, m = {m}")));
    }
    if n > FACTOR_BUDGET {
        return Err(Error::Budget(format!("n = {n} exceeds the factorisation budget {FACTOR_BUDGET}")));
    }
    let (mut q, mut r) = (1u64, 1u64);
    let mut rest = n;
    let mut absorb = |p: u64, a: u32| {
        q *= p.pow(a % m);
        r *= p.pow(a / m);
    };
    let mut p = 2u64;
    while p * p <= rest {
        if rest.is_multiple_of(p) {
            let mut a = 0;
            while rest.is_multiple_of(p) {
                rest /= p;
                a += 1;
            }
            absorb(p, a);
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        absorb(rest, 1);
    }
    Ok(KernelDecomposition { n, m, q, r })
}

/// Kernels of 1..=limit from a smallest-prime-factor sieve (index 0 unused).
fn kernel_table(limit: usize, m: u32) -> Vec<(u64, u64)> {
    let sieve = LinearSieve::new(limit.max(1));
    let mut out = vec![(0, 0); limit + 1];
    for (n, slot) in out.iter_mut().enumerate().skip(1) {
        let (mut q, mut r) = (1u64, 1u64);
        for (p, a) in sieve.factorize(n) {
            q *= p.pow(a % m);
            r *= p.pow(a / m);
        }
        *slot = (q, r);
    }
    out
}

fn check_signs(eps: &[i8]) -> Result<()> {
    if let Some(e) = eps.iter().find(|&&e| e != 1 && e != -1) {
        return Err(Error::InvalidParameter(format!("sign {e} is not +1 or -1")));
    }
    Ok(())
}

/// Whether sum_j eps_j n_j^{1/m} = 0, decided by kernel grouping.
pub fn is_zero_alternating(m: u32, ns: &[u64], eps: &[i8]) -> Result<bool> {
    if ns.len() != eps.len() || ns.is_empty() {
        return Err(Error::InvalidParameter(format!(
            "need equal non-empty lists, got {} values and {} signs",
            ns.len(),
            eps.len()
        )));
    }
    check_signs(eps)?;
    let kernels = ns
        .iter()
        .map(|&n| powerfree_kernel(n, m).map(|k| (k.q, k.r)))
        .collect::<Result<Vec<_>>>()?;
    Ok(zero_by_kernels(&kernels, eps))
}

fn zero_by_kernels(kernels: &[(u64, u64)], eps: &[i8]) -> bool {
    let mut groups: Vec<(u64, i128)> = Vec::with_capacity(kernels.len());
    for (&(q, r), &e) in kernels.iter().zip(eps) {
        let v = e as i128 * r as i128;
        match groups.iter_mut().find(|g| g.0 == q) {
            Some(g) => g.1 += v,
            None => groups.push((q, v)),
        }
    }
    groups.iter().all(|g| g.1 == 0)
}

fn check_budget(n_max: u64, k: usize, budget: u64) -> Result<u64> {
    let count = (2 * n_max as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    if count > budget as u128 {
        return Err(Error::Budget(format!(
            "(2N)^k = {count} tuple checks for N = {n_max}, k = {k} exceeds {budget}"
        )));
    }
    if budget > DEFAULT_TUPLE_BUDGET {
        warn!("enumeration budget raised to {budget} (default {DEFAULT_TUPLE_BUDGET})");
    }
    Ok(count as u64)
}

/// Decodes tuple index `idx` of [N]^k (first coordinate most significant) into `out`.
fn decode_tuple(mut idx: u64, n_max: u64, out: &mut [u64]) {
    for slot in out.iter_mut().rev() {
        *slot = idx % n_max + 1;
        idx /= n_max;
    }
}

#[inline]
fn sign(bits: u32, j: usize, k: usize) -> i8 {
    // first coordinate is the most significant bit; 0 means +
    if bits >> (k - 1 - j) & 1 == 0 {
        1
    } else {
        -1
    }
}

/// Smallest non-zero |sum eps_j n_j^{1/m}| over {+-1}^k x [N]^k.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinAlternating {
    pub m: u32,
    #[serde(rename = "N")]
    pub n_max: u64,
    pub k: usize,
    pub min_abs: f64,
    /// Enclosure of the minimum from the fixed-point interval.
    pub min_abs_lower: f64,
    pub min_abs_upper: f64,
    /// Witness with positive sum, terms ordered by decreasing n.
    pub witness_ns: Vec<u64>,
    pub witness_eps: Vec<i8>,
    /// (k N^{1/m})^{-(m^k - 1)} and its natural logarithm.
    pub bound: f64,
    pub log_bound: f64,
    /// min_abs >= bound, compared in log space.
    pub holds: bool,
    pub tuples_checked: u64,
    pub exact_zeros: u64,
    /// Fixed-point precision (bits after the binary point) that separated every sum.
    pub precision_bits: u32,
}

const START_BITS: u32 = 160;
const MAX_BITS: u32 = 2048;

/// floor(n^{1/m} 2^bits) and whether the root is exact.
fn fixed_root(n: u64, m: u32, bits: u32) -> (BigInt, bool) {
    let scaled = BigUint::from(n) << (bits * m);
    let root = scaled.nth_root(m);
    let exact = root.pow(m) == scaled;
    (BigInt::from_biguint(Sign::Plus, root), exact)
}

struct Candidate {
    order: u64,
    center: BigInt,
    lower: BigInt,
    upper: BigInt,
    bits: u32,
    ns: Vec<u64>,
    eps: Vec<i8>,
}

/// Full enumeration of the alternating sums with exact zero skipping and
/// fixed-point interval magnitudes.
pub fn min_alternating_sum(m: u32, n_max: u64, k: usize, budget: u64) -> Result<MinAlternating> {
    if m < 2 || n_max < 1 || k < 1 {
        return Err(Error::InvalidParameter(format!("need m >= 2, N >= 1, k >= 1; got m = {m}, N = {n_max}, k = {k}")));
    }
    let total = check_budget(n_max, k, budget)?;
    let kernels = kernel_table(n_max as usize, m);
    let roots: Vec<(BigInt, bool)> = (0..=n_max).map(|n| fixed_root(n, m, START_BITS)).collect();
    let tuples = n_max.pow(k as u32);
    let signs = 1u32 << k;

    let per_lead: Vec<Result<(Option<Candidate>, u64, u32)>> = (0..n_max)
        .into_par_iter()
        .map(|lead| {
            let mut best: Option<Candidate> = None;
            let mut zeros = 0u64;
            let mut max_bits = START_BITS;
            let span = tuples / n_max;
            let mut ns = vec![0u64; k];
            let mut ker = vec![(0u64, 0u64); k];
            let mut eps = vec![0i8; k];
            for t in lead * span..(lead + 1) * span {
                decode_tuple(t, n_max, &mut ns);
                for (slot, &n) in ker.iter_mut().zip(&ns) {
                    *slot = kernels[n as usize];
                }
                for bits in 0..signs {
                    for (j, e) in eps.iter_mut().enumerate() {
                        *e = sign(bits, j, k);
                    }
                    if zero_by_kernels(&ker, &eps) {
                        zeros += 1;
                        continue;
                    }
                    let order = t * signs as u64 + bits as u64;
                    let (center, lower, upper, used) = enclose(&ns, &eps, m, &roots)?;
                    max_bits = max_bits.max(used);
                    let mag = scaled_abs(&center, used);
                    let better = match &best {
                        None => true,
                        Some(b) => mag < scaled_abs(&b.center, b.bits),
                    };
                    if better {
                        best = Some(Candidate {
                            order,
                            center,
                            lower,
                            upper,
                            bits: used,
                            ns: ns.clone(),
                            eps: eps.clone(),
                        });
                    }
                }
            }
            Ok((best, zeros, max_bits))
        })
        .collect();

    let mut best: Option<Candidate> = None;
    let mut zeros = 0;
    let mut bits_used = START_BITS;
    for r in per_lead {
        let (cand, z, b) = r?;
        zeros += z;
        bits_used = bits_used.max(b);
        if let Some(c) = cand {
            let replace = match &best {
                None => true,
                Some(b) => {
                    let (x, y) = (scaled_abs(&c.center, c.bits), scaled_abs(&b.center, b.bits));
                    x < y || (x == y && c.order < b.order)
                }
            };
            if replace {
                best = Some(c);
            }
        }
    }

    let kf = k as f64;
    let exponent = (m as f64).powi(k as i32) - 1.0;
    let log_bound = -exponent * (kf.ln() + (n_max as f64).ln() / m as f64);
    let Some(b) = best else {
        return Err(Error::InvalidParameter(format!(
            "every sum vanishes for m = {m}, N = {n_max}, k = {k}"
        )));
    };
    let to_f64 = |v: &BigInt| v.abs().to_f64().unwrap_or(f64::INFINITY) / 2f64.powi(b.bits as i32);
    let min_abs = to_f64(&b.center);
    let (lo, hi) = if b.center.is_negative() {
        (to_f64(&b.upper), to_f64(&b.lower))
    } else {
        (to_f64(&b.lower), to_f64(&b.upper))
    };
    let (witness_ns, witness_eps) = canonical_witness(&b.ns, &b.eps, b.center.is_negative());
    Ok(MinAlternating {
        m,
        n_max,
        k,
        min_abs,
        min_abs_lower: lo,
        min_abs_upper: hi,
        witness_ns,
        witness_eps,
        bound: log_bound.exp(),
        log_bound,
        holds: lo.ln() >= log_bound,
        tuples_checked: total,
        exact_zeros: zeros,
        precision_bits: bits_used,
    })
}

/// |center| rescaled to a common precision for comparisons.
fn scaled_abs(center: &BigInt, bits: u32) -> BigInt {
    center.abs() << (MAX_BITS - bits)
}

/// Interval [lower, upper] for 2^bits sum eps_j n_j^{1/m}, refined until it excludes 0.
fn enclose(ns: &[u64], eps: &[i8], m: u32, base: &[(BigInt, bool)]) -> Result<(BigInt, BigInt, BigInt, u32)> {
    let mut bits = START_BITS;
    loop {
        let mut center = BigInt::zero();
        let (mut below, mut above) = (0i64, 0i64);
        for (&n, &e) in ns.iter().zip(eps) {
            let (root, exact) = if bits == START_BITS {
                base[n as usize].clone()
            } else {
                fixed_root(n, m, bits)
            };
            if e > 0 {
                center += root;
                above += (!exact) as i64;
            } else {
                center -= root;
                below += (!exact) as i64;
            }
        }
        let lower = &center - below;
        let upper = &center + above;
        if lower.is_positive() || upper.is_negative() {
            return Ok((center, lower, upper, bits));
        }
        if bits >= MAX_BITS {
            return Err(Error::Separation(format!("ns = {ns:?}, eps = {eps:?}")));
        }
        bits *= 2;
    }
}

fn canonical_witness(ns: &[u64], eps: &[i8], flip: bool) -> (Vec<u64>, Vec<i8>) {
    let mut pairs: Vec<(u64, i8)> = ns
        .iter()
        .zip(eps)
        .map(|(&n, &e)| (n, if flip { -e } else { e }))
        .collect();
    pairs.sort_by(|a, b| b.0.cmp(&a.0).then(b.1.cmp(&a.1)));
    pairs.into_iter().unzip()
}

/// One kernel group of a vanishing tuple.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagonalGroup {
    pub q: u64,
    /// Positions (1-based) of the group's members in the tuple.
    pub indices: Vec<usize>,
    /// (eps_j, r_j) for those positions; sum eps_j r_j = 0.
    pub terms: Vec<(i8, u64)>,
}

/// A vanishing tuple in grouped (q, S, r) form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagonalDecomposition {
    pub k: usize,
    pub m: u32,
    #[serde(rename = "N")]
    pub n_max: u64,
    pub ns: Vec<u64>,
    pub eps: Vec<i8>,
    pub groups: Vec<DiagonalGroup>,
}

fn group_tuple(eps: &[i8], ker: &[(u64, u64)]) -> Vec<DiagonalGroup> {
    let mut groups: Vec<DiagonalGroup> = Vec::new();
    for (j, (&(q, r), &e)) in ker.iter().zip(eps).enumerate() {
        match groups.iter_mut().find(|g| g.q == q) {
            Some(g) => {
                g.indices.push(j + 1);
                g.terms.push((e, r));
            }
            None => groups.push(DiagonalGroup {
                q,
                indices: vec![j + 1],
                terms: vec![(e, r)],
            }),
        }
    }
    groups
}

/// Every (eps, n) in {+-1}^k x [N]^k whose alternating root sum vanishes,
/// in lexicographic order of n (then of eps, + before -).
pub fn enumerate_diagonal(m: u32, n_max: u64, k: usize, budget: u64) -> Result<Vec<DiagonalDecomposition>> {
    if m < 2 || n_max < 1 || k < 1 {
        return Err(Error::InvalidParameter(format!("need m >= 2, N >= 1, k >= 1; got m = {m}, N = {n_max}, k = {k}")));
    }
    check_budget(n_max, k, budget)?;
    let kernels = kernel_table(n_max as usize, m);
    let tuples = n_max.pow(k as u32);
    let span = tuples / n_max;
    let signs = 1u32 << k;
    let chunks: Vec<Vec<DiagonalDecomposition>> = (0..n_max)
        .into_par_iter()
        .map(|lead| {
            let mut out = Vec::new();
            let mut ns = vec![0u64; k];
            let mut ker = vec![(0u64, 0u64); k];
            let mut eps = vec![0i8; k];
            for t in lead * span..(lead + 1) * span {
                decode_tuple(t, n_max, &mut ns);
                for (slot, &n) in ker.iter_mut().zip(&ns) {
                    *slot = kernels[n as usize];
                }
                for bits in 0..signs {
                    for (j, e) in eps.iter_mut().enumerate() {
                        *e = sign(bits, j, k);
                    }
                    if zero_by_kernels(&ker, &eps) {
                        out.push(DiagonalDecomposition {
                            k,
                            m,
                            n_max,
                            ns: ns.clone(),
                            eps: eps.clone(),
                            groups: group_tuple(&eps, &ker),
                        });
                    }
                }
            }
            out
        })
        .collect();
    Ok(chunks.into_iter().flatten().collect())
}

/// Writes one decomposition per line as JSON.
pub fn write_diagonal_jsonl(items: &[DiagonalDecomposition], path: impl AsRef<Path>) -> Result<()> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    for item in items {
        serde_json::to_writer(&mut f, item)?;
        f.write_all(b"\n")?;
    }
    f.flush()?;
    Ok(())
}

/// a(n) = lambda(n)/sqrt(n) * sin(pi breve(n) delta)/sqrt(breve(n)) for n <= N (index 0 unused).
fn diagonal_weights(d: &LFunctionDescriptor, table: &CoefficientTable, delta: f64, n: usize) -> Result<Vec<f64>> {
    if n > table.n_max {
        return Err(Error::OutOfRange {
            t: n as f64,
            limit: table.n_max as f64,
        });
    }
    let mut a = vec![0.0; n + 1];
    for (k, slot) in a.iter_mut().enumerate().skip(1) {
        let b = crate::voronoi::breve(k as u64, d);
        *slot = table.lambda(k) / (k as f64).sqrt() * (PI * b * delta).sin() / b.sqrt();
    }
    Ok(a)
}

/// D_q(S) for |S| = size: (w/pi)^size times the sum over (eps, r) in
/// {+-1}^size x [R_q]^size with sum eps_j r_j = 0 of prod a(q r_j^m) e^{i eps_j phi}.
///
/// The constrained sum is the constant coefficient of G(y)^size with
/// G(y) = sum_r a(q r^m) (e^{i phi} y^r + e^{-i phi} y^{-r}).
pub fn diagonal_block(
    d: &LFunctionDescriptor,
    table: &CoefficientTable,
    delta: f64,
    n: usize,
    q: u64,
    size: usize,
) -> Result<Complex64> {
    let a = diagonal_weights(d, table, delta, n)?;
    let blocks = block_sums(&a, d, q, size);
    Ok(blocks[size])
}

/// [D_q(S) for |S| = 0..=k_max] from the weights.
fn block_sums(a: &[f64], d: &LFunctionDescriptor, q: u64, k_max: usize) -> Vec<Complex64> {
    let n = (a.len() - 1) as u64;
    let m = d.m;
    let r_max = iroot(n / q, m) as usize;
    let e = Complex64::from_polar(1.0, d.phi);
    // g[r + R] is the coefficient of y^r
    let width = 2 * r_max + 1;
    let mut g = vec![Complex64::zero(); width];
    for r in 1..=r_max {
        let v = a[(q * (r as u64).pow(m)) as usize];
        g[r_max + r] = e * v;
        g[r_max - r] = e.conj() * v;
    }
    let scale = d.w as f64 / PI;
    let mut out = vec![Complex64::zero(); k_max + 1];
    out[0] = Complex64::new(1.0, 0.0);
    if k_max == 0 {
        return out;
    }
    // power[s] covers offsets -s R..=s R
    let mut power = g.clone();
    let mut factor = scale;
    for s in 1..=k_max {
        if s > 1 {
            if s == k_max {
                // only the constant coefficient of the last power is needed
                let half = (power.len() - 1) / 2;
                let mut c = Complex64::zero();
                for j in 0..width {
                    let off = j as i64 - r_max as i64;
                    let idx = half as i64 - off;
                    if idx >= 0 && (idx as usize) < power.len() {
                        c += power[idx as usize] * g[j];
                    }
                }
                factor *= scale;
                out[s] = c * factor;
                break;
            }
            let mut next = vec![Complex64::zero(); power.len() + width - 1];
            for (i, &p) in power.iter().enumerate() {
                if p == Complex64::zero() {
                    continue;
                }
                for (j, &gv) in g.iter().enumerate() {
                    next[i + j] += p * gv;
                }
            }
            power = next;
            factor *= scale;
        }
        let half = (power.len() - 1) / 2;
        out[s] = power[half] * factor;
    }
    out
}

/// Diagonal value of the k-th windowed moment of Delta(x, delta; N): the sum
/// over set partitions of [k] into blocks with distinct kernels q of the
/// products of D_q(block).
///
/// Evaluated as k! [z^k] prod_q (1 + sum_{s>=2} D_q(s) z^s / s!), which
/// enforces distinct kernels across blocks; the real part is returned after
/// checking that the imaginary part vanishes.
pub fn moment_oracle(d: &LFunctionDescriptor, table: &CoefficientTable, delta: f64, n: usize, k: usize) -> Result<f64> {
    if k == 0 {
        return Ok(1.0);
    }
    let a = diagonal_weights(d, table, delta, n)?;
    let kernels = kernel_table(n, d.m);
    let mut fact = vec![1.0; k + 1];
    for i in 1..=k {
        fact[i] = fact[i - 1] * i as f64;
    }
    let mut gf = vec![Complex64::zero(); k + 1];
    gf[0] = Complex64::new(1.0, 0.0);
    for q in 1..=n {
        if kernels[q].1 != 1 {
            continue;
        }
        let blocks = block_sums(&a, d, q as u64, k);
        let mut next = gf.clone();
        for (deg, &base) in gf.iter().enumerate() {
            if base == Complex64::zero() {
                continue;
            }
            for s in 2..=k - deg {
                next[deg + s] += base * blocks[s] / fact[s];
            }
        }
        gf = next;
    }
    let total = gf[k] * fact[k];
    check_real(total)
}

fn check_real(z: Complex64) -> Result<f64> {
    if z.im.abs() > 1e-12 * z.re.abs().max(f64::MIN_POSITIVE) && z.im.abs() > 1e-300 {
        return Err(Error::ImaginaryResidue(z.im));
    }
    Ok(z.re)
}

/// The same diagonal value by enumerating every vanishing (eps, n) tuple and
/// summing prod (w/pi) a(n_j) e^{i eps_j phi}; bounded by the tuple budget.
pub fn moment_oracle_enumerated(
    d: &LFunctionDescriptor,
    table: &CoefficientTable,
    delta: f64,
    n: usize,
    k: usize,
    budget: u64,
) -> Result<f64> {
    let a = diagonal_weights(d, table, delta, n)?;
    let tuples = enumerate_diagonal(d.m, n as u64, k, budget)?;
    let e = Complex64::from_polar(1.0, d.phi);
    let scale = d.w as f64 / PI;
    let mut re = CompensatedSum::new();
    let mut im = CompensatedSum::new();
    for t in &tuples {
        let mut z = Complex64::new(1.0, 0.0);
        for (&nj, &ej) in t.ns.iter().zip(&t.eps) {
            let phase = if ej > 0 { e } else { e.conj() };
            z *= phase * (scale * a[nj as usize]);
        }
        re.add(z.re);
        im.add(z.im);
    }
    check_real(Complex64::new(re.value(), im.value()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::{sieve_gaussian_ideals, sieve_tau_k};
    use crate::lfun::{builtin_descriptor, Builtin};
    use crate::variance::sigma_sq_truncated;

    #[test]
    fn kernel_examples() {
        assert_eq!(powerfree_kernel(12, 2).unwrap(), KernelDecomposition { n: 12, m: 2, q: 3, r: 2 });
        assert_eq!(powerfree_kernel(1, 3).unwrap(), KernelDecomposition { n: 1, m: 3, q: 1, r: 1 });
        assert_eq!(powerfree_kernel(64, 3).unwrap(), KernelDecomposition { n: 64, m: 3, q: 1, r: 4 });
        let big = powerfree_kernel(999_999_999_989, 2).unwrap();
        assert_eq!((big.q, big.r), (999_999_999_989, 1));
        assert!(powerfree_kernel(FACTOR_BUDGET + 1, 2).is_err());
        assert!(powerfree_kernel(0, 2).is_err());
    }

    #[test]
    fn kernel_table_agrees_with_trial_division() {
        for m in [2, 3] {
            let t = kernel_table(5000, m);
            for n in 1..=5000u64 {
                let k = powerfree_kernel(n, m).unwrap();
                assert_eq!(t[n as usize], (k.q, k.r));
            }
        }
    }

    #[test]
    fn zero_detection_examples() {
        assert!(!is_zero_alternating(2, &[2, 8], &[1, -1]).unwrap());
        assert!(is_zero_alternating(2, &[2, 2], &[1, -1]).unwrap());
        assert!(is_zero_alternating(2, &[3, 12, 27], &[1, 1, -1]).unwrap());
        assert!(is_zero_alternating(2, &[3], &[1, -1]).is_err());
        assert!(is_zero_alternating(2, &[3], &[2]).is_err());
    }

    #[test]
    fn minimum_examples() {
        let r = min_alternating_sum(2, 5, 2, DEFAULT_TUPLE_BUDGET).unwrap();
        assert!((r.min_abs - (5f64.sqrt() - 2.0)).abs() < 1e-15);
        assert_eq!(r.witness_ns, vec![5, 4]);
        assert_eq!(r.witness_eps, vec![1, -1]);
        assert!((r.bound - (2.0 * 5f64.sqrt()).powi(-3)).abs() < 1e-15);
        assert!(r.holds);

        let r = min_alternating_sum(2, 1, 2, DEFAULT_TUPLE_BUDGET).unwrap();
        assert_eq!(r.min_abs, 2.0);
        assert!(r.holds && (r.bound - 0.125).abs() < 1e-15);

        let r = min_alternating_sum(3, 3, 2, DEFAULT_TUPLE_BUDGET).unwrap();
        assert!((r.min_abs - (3f64.cbrt() - 2f64.cbrt())).abs() < 1e-15);
        assert!((r.min_abs - 0.1823).abs() < 1e-4);
        assert!(r.holds);
        assert!(r.min_abs_lower <= r.min_abs && r.min_abs <= r.min_abs_upper);
    }

    #[test]
    fn budget_enforced() {
        assert!(matches!(min_alternating_sum(2, 20, 4, 1000), Err(Error::Budget(_))));
        assert!(matches!(enumerate_diagonal(2, 20, 4, 1000), Err(Error::Budget(_))));
    }

    #[test]
    fn diagonal_k2() {
        let items = enumerate_diagonal(2, 5, 2, DEFAULT_TUPLE_BUDGET).unwrap();
        assert_eq!(items.len(), 10);
        for it in &items {
            assert_eq!(it.ns[0], it.ns[1]);
            assert_eq!(it.eps[0], -it.eps[1]);
            assert_eq!(it.groups.len(), 1);
        }
        assert!(enumerate_diagonal(2, 7, 1, DEFAULT_TUPLE_BUDGET).unwrap().is_empty());
    }

    #[test]
    fn diagonal_groups_partition() {
        for it in enumerate_diagonal(2, 4, 4, DEFAULT_TUPLE_BUDGET).unwrap() {
            let mut seen: Vec<usize> = it.groups.iter().flat_map(|g| g.indices.clone()).collect();
            seen.sort_unstable();
            assert_eq!(seen, vec![1, 2, 3, 4]);
            for g in &it.groups {
                let s: i64 = g.terms.iter().map(|&(e, r)| e as i64 * r as i64).sum();
                assert_eq!(s, 0);
                assert_eq!(powerfree_kernel(g.q, 2).unwrap().r, 1);
            }
        }
    }

    #[test]
    fn jsonl_dump() {
        let items = enumerate_diagonal(2, 3, 2, DEFAULT_TUPLE_BUDGET).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("d.jsonl");
        write_diagonal_jsonl(&items, &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text.lines().count(), items.len());
        let first: DiagonalDecomposition = serde_json::from_str(text.lines().next().unwrap()).unwrap();
        assert_eq!(first, items[0]);
    }

    #[test]
    fn moment_low_orders() {
        let g = builtin_descriptor(Builtin::GaussianIdeals).unwrap();
        let table = sieve_gaussian_ideals(5000).unwrap();
        for delta in [0.1, 0.01] {
            let m2 = moment_oracle(&g, &table, delta, 5000, 2).unwrap();
            let s2 = sigma_sq_truncated(&g, &table, delta, 5000).unwrap();
            assert!((m2 / s2 - 1.0).abs() < 1e-12, "{m2} vs {s2}");
            assert_eq!(moment_oracle(&g, &table, delta, 5000, 1).unwrap(), 0.0);
        }
    }

    #[test]
    fn moment_methods_agree() {
        let t = builtin_descriptor(Builtin::TauK(2)).unwrap();
        let table = sieve_tau_k(2, 30).unwrap();
        let g = builtin_descriptor(Builtin::GaussianIdeals).unwrap();
        let gt = sieve_gaussian_ideals(30).unwrap();
        for (d, tb) in [(&t, &table), (&g, &gt)] {
            for k in 2..=4 {
                let a = moment_oracle(d, tb, 0.1, 20, k).unwrap();
                let b = moment_oracle_enumerated(d, tb, 0.1, 20, k, DEFAULT_TUPLE_BUDGET).unwrap();
                assert!((a - b).abs() <= 1e-12 * b.abs().max(1e-300), "k = {k}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn diagonal_block_sizes() {
        let g = builtin_descriptor(Builtin::GaussianIdeals).unwrap();
        let table = sieve_gaussian_ideals(100).unwrap();
        assert_eq!(diagonal_block(&g, &table, 0.1, 100, 2, 1).unwrap(), Complex64::zero());
        // |S| = 2 on kernel q: (2/pi^2) sum_r a(q r^2)^2
        let a = diagonal_weights(&g, &table, 0.1, 100).unwrap();
        let expect: f64 = (1..=7u64).map(|r| a[(2 * r * r) as usize].powi(2)).sum::<f64>() * 2.0 / (PI * PI);
        let got = diagonal_block(&g, &table, 0.1, 100, 2, 2).unwrap();
        assert!((got.re - expect).abs() < 1e-15 && got.im.abs() < 1e-15);
    }
}
