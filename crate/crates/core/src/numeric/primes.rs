//! Smallest-prime-factor sieves.

/// Linear (Euler) sieve recording the smallest prime factor of every n <= limit.
pub struct LinearSieve {
    spf: Vec<u32>,
    primes: Vec<u32>,
}

impl LinearSieve {
    pub fn new(limit: usize) -> Self {
        assert!(limit < u32::MAX as usize, "sieve limit must fit in u32");
        let mut spf = vec![0u32; limit + 1];
        let mut primes = Vec::new();
        for i in 2..=limit {
            if spf[i] == 0 {
                spf[i] = i as u32;
                primes.push(i as u32);
            }
            let si = spf[i];
            for &p in &primes {
                let ip = i * p as usize;
                if p > si || ip > limit {
                    break;
                }
                spf[ip] = p;
            }
        }
        LinearSieve { spf, primes }
    }

    pub fn limit(&self) -> usize {
        self.spf.len() - 1
    }

    #[inline]
    pub fn spf(&self, n: usize) -> u32 {
        self.spf[n]
    }

    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    /// Prime factorisation as (p, a) pairs in increasing p.
    pub fn factorize(&self, mut n: usize) -> Vec<(u64, u32)> {
        let mut out = Vec::new();
        while n > 1 {
            let p = self.spf[n] as usize;
            let mut a = 0;
            while n.is_multiple_of(p) {
                n /= p;
                a += 1;
            }
            out.push((p as u64, a));
        }
        out
    }

    /// Values f(1..=limit) of the multiplicative function with f(p^a) = local(p, a).
    /// Index 0 of the result is unused and set to `T::default()`.
    pub fn multiplicative<T, E, F>(&self, one: T, mut local: F) -> Result<Vec<T>, E>
    where
        T: Copy + Default,
        F: FnMut(usize, u64, u32, T) -> Result<T, E>,
    {
        let limit = self.limit();
        let mut out = vec![T::default(); limit + 1];
        if limit >= 1 {
            out[1] = one;
        }
        for n in 2..=limit {
            let p = self.spf[n] as usize;
            let mut m = n / p;
            let mut a = 1;
            while m.is_multiple_of(p) {
                m /= p;
                a += 1;
            }
            // f(n) = f(m) * f(p^a); the closure does the multiplication so it
            // can check for overflow and report n
            out[n] = local(n, p as u64, a, out[m])?;
        }
        Ok(out)
    }
}

/// All primes <= limit.
pub fn primes_up_to(limit: usize) -> Vec<u32> {
    LinearSieve::new(limit.max(1)).primes
}

/// Streams the values of a multiplicative function over 1..=n_max in blocks
/// without holding a full table. `local(p, a)` gives f(p^a); `visit(start, values)`
/// receives consecutive blocks with `values[i] = f(start + i)`.
pub fn segmented_multiplicative<F, G>(n_max: u64, block: usize, local: F, mut visit: G)
where
    F: Fn(u64, u32) -> f64,
    G: FnMut(u64, &[f64]),
{
    assert!(n_max < u32::MAX as u64, "segmented sieve limited to n < 2^32");
    let root = (n_max as f64).sqrt() as usize + 2;
    let primes = primes_up_to(root);
    let mut vals = vec![0f64; block];
    let mut prod = vec![0u64; block];
    let mut exps = vec![0u8; block];
    let mut lo = 1u64;
    while lo <= n_max {
        let hi = (lo + block as u64 - 1).min(n_max);
        let len = (hi - lo + 1) as usize;
        vals[..len].fill(1.0);
        prod[..len].fill(1);
        for &p in &primes {
            let p = p as u64;
            if p * p > hi {
                break;
            }
            let first = lo.div_ceil(p) * p;
            if first > hi {
                continue;
            }
            // exponent counts via multiples of p, p^2, ...
            let mut pk = p;
            loop {
                let start = lo.div_ceil(pk) * pk;
                let mut n = start;
                while n <= hi {
                    exps[(n - lo) as usize] += 1;
                    n += pk;
                }
                match pk.checked_mul(p) {
                    Some(next) if next <= hi => pk = next,
                    _ => break,
                }
            }
            let mut n = first;
            while n <= hi {
                let i = (n - lo) as usize;
                let a = exps[i] as u32;
                exps[i] = 0;
                vals[i] *= local(p, a);
                prod[i] *= p.pow(a);
                n += p;
            }
        }
        for i in 0..len {
            let n = lo + i as u64;
            if prod[i] != n {
                let q = n / prod[i];
                vals[i] *= local(q, 1);
            }
        }
        visit(lo, &vals[..len]);
        lo = hi + 1;
    }
}
