use num_bigint::{BigInt, BigUint, Sign};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use shortwave_core::algebra::{
    enumerate_diagonal, is_zero_alternating, moment_oracle, moment_oracle_enumerated, powerfree_kernel,
    DEFAULT_TUPLE_BUDGET,
};
use shortwave_core::coefficients::builtin_table;
use shortwave_core::lfun::{builtin_descriptor, Builtin};

const BITS: u32 = 256;

fn fixed_sum(m: u32, ns: &[u64], eps: &[i8]) -> BigInt {
    ns.iter()
        .zip(eps)
        .map(|(&n, &e)| {
            let root = BigInt::from_biguint(Sign::Plus, (BigUint::from(n) << (BITS * m)).nth_root(m));
            if e > 0 {
                root
            } else {
                -root
            }
        })
        .sum()
}

fn numerically_zero(m: u32, ns: &[u64], eps: &[i8]) -> bool {
    fixed_sum(m, ns, eps).magnitude() <= &BigUint::from(ns.len())
}

fn has_mth_power_factor(q: u64, m: u32) -> bool {
    let mut p = 2u64;
    while p.pow(m) <= q {
        if q.is_multiple_of(p.pow(m)) {
            return true;
        }
        p += 1;
    }
    false
}

#[test]
fn kernels_split_every_n_up_to_1e5() {
    for m in [2, 3] {
        for n in 1..=100_000u64 {
            let k = powerfree_kernel(n, m).unwrap();
            assert_eq!(k.q * k.r.pow(m), n, "n = {n}, m = {m}");
            if n % 97 == 0 || n < 2000 {
                assert!(!has_mth_power_factor(k.q, m), "q = {} not {m}-free", k.q);
            }
        }
    }
}

#[test]
fn exact_zero_test_agrees_with_fixed_point() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut zeros = 0;
    for trial in 0..4000 {
        let m = if trial % 2 == 0 { 2 } else { 3 };
        let k = rng.random_range(2..=4);
        let n_max = if m == 2 { 50 } else { 30 };
        let mut ns: Vec<u64> = (0..k).map(|_| rng.random_range(1..=n_max)).collect();
        let mut eps: Vec<i8> = (0..k).map(|_| if rng.random::<bool>() { 1 } else { -1 }).collect();
        if trial % 3 == 0 {
            // n and r^m n share a kernel
            ns[1] = ns[0] * if m == 2 { 4 } else { 8 };
            if k >= 3 {
                ns[2] = ns[0];
                eps[0] = 1;
                eps[2] = 1;
                eps[1] = -1;
                ns.truncate(3);
                eps.truncate(3);
            }
        }
        let exact = is_zero_alternating(m, &ns, &eps).unwrap();
        assert_eq!(exact, numerically_zero(m, &ns, &eps), "m = {m}, ns = {ns:?}, eps = {eps:?}");
        zeros += exact as u32;
    }
    assert!(zeros > 100, "only {zeros} vanishing cases exercised");
}

#[test]
fn square_root_pairs_vanish_only_on_the_diagonal() {
    let tuples = enumerate_diagonal(2, 5, 2, DEFAULT_TUPLE_BUDGET).unwrap();
    assert_eq!(tuples.len(), 10);
    for t in &tuples {
        assert_eq!(t.ns[0], t.ns[1]);
        assert_eq!(t.eps[0], -t.eps[1]);
        assert_eq!(t.groups.len(), 1);
    }
}

#[test]
fn fourth_moment_tuples_match_brute_force() {
    let (m, n_max, k) = (2u32, 4u64, 4usize);
    let tuples = enumerate_diagonal(m, n_max, k, DEFAULT_TUPLE_BUDGET).unwrap();
    let mut brute = Vec::new();
    for code in 0..n_max.pow(k as u32) {
        let ns: Vec<u64> = (0..k).map(|j| code / n_max.pow((k - 1 - j) as u32) % n_max + 1).collect();
        for s in 0..1u32 << k {
            let eps: Vec<i8> = (0..k).map(|j| if s >> (k - 1 - j) & 1 == 0 { 1 } else { -1 }).collect();
            let v: f64 = ns.iter().zip(&eps).map(|(&n, &e)| e as f64 * (n as f64).sqrt()).sum();
            if v.abs() < 1e-9 {
                brute.push((ns.clone(), eps));
            }
        }
    }
    let found: Vec<(Vec<u64>, Vec<i8>)> = tuples.iter().map(|t| (t.ns.clone(), t.eps.clone())).collect();
    assert_eq!(found, brute);
    for t in &tuples {
        for g in &t.groups {
            assert_eq!(g.terms.iter().map(|&(e, r)| e as i64 * r as i64).sum::<i64>(), 0);
        }
    }
}

#[test]
fn generating_function_matches_enumeration() {
    for (which, n, delta) in [(Builtin::TauK(2), 40, 0.1), (Builtin::GaussianIdeals, 30, 0.2), (Builtin::TauK(3), 12, 0.3)] {
        let d = builtin_descriptor(which).unwrap();
        let table = builtin_table(which, n).unwrap();
        for k in 2..=4 {
            let gf = moment_oracle(&d, &table, delta, n, k).unwrap();
            let en = moment_oracle_enumerated(&d, &table, delta, n, k, DEFAULT_TUPLE_BUDGET).unwrap();
            let scale = gf.abs().max(en.abs()).max(1e-300);
            assert!((gf - en).abs() <= 1e-10 * scale, "{which} k = {k}: {gf} vs {en}");
        }
    }
}
