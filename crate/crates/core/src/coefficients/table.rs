use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::CompensatedSum;

/// Coefficients lambda(1..=n_max) with prefix sums of lambda and lambda^2.
///
/// Integer-backed tables keep `values_exact[n] = exact_scale * lambda(n)`
/// (for instance r_2(n) = 4 lambda(n) for Gaussian ideal counts); their
/// prefix sums accumulate in i128 and are converted to floating point on
/// store. Index 0 of every array is a placeholder so that `values[n]` is
/// lambda(n) and `prefix[T]` is the sum over n <= T.
#[derive(Clone, Debug)]
pub struct CoefficientTable {
    pub descriptor_id: String,
    pub n_max: usize,
    exact: Option<ExactBacking>,
    values: Vec<f64>,
    prefix: Vec<f64>,
    prefix_sq: Vec<f64>,
}

#[derive(Clone, Debug)]
struct ExactBacking {
    scale: i128,
    values: Vec<i128>,
    prefix: Vec<i128>,
}

/// Metadata written next to an exported table.
#[derive(Clone, Debug, PartialEq, Serialize, serde::Deserialize)]
pub struct TableMetadata {
    pub descriptor_id: String,
    pub n_max: usize,
    /// FNV-1a (64 bit) over the little-endian bit patterns of lambda(1..=n_max).
    pub checksum: String,
}

impl CoefficientTable {
    /// Table from exact scaled integers (`exact[0]` ignored) with
    /// lambda(n) = exact[n] / scale. The squared prefix sums are exact too.
    pub fn from_exact(descriptor_id: impl Into<String>, exact: Vec<i128>, scale: i128) -> Result<Self> {
        let inv = 1.0 / scale as f64;
        Self::build_exact(descriptor_id.into(), exact, scale, |_, v| v as f64 * inv, true)
    }

    /// Table from exact integers whose floating values need their own
    /// normalisation (for instance tau(n) / n^{11/2}); squares accumulate in floats.
    pub fn from_exact_normalized<F>(descriptor_id: impl Into<String>, exact: Vec<i128>, normalize: F) -> Result<Self>
    where
        F: Fn(usize, i128) -> f64,
    {
        Self::build_exact(descriptor_id.into(), exact, 1, normalize, false)
    }

    fn build_exact<F>(descriptor_id: String, exact: Vec<i128>, scale: i128, normalize: F, exact_squares: bool) -> Result<Self>
    where
        F: Fn(usize, i128) -> f64,
    {
        let n_max = exact.len().saturating_sub(1);
        let mut values = vec![0.0; n_max + 1];
        let mut prefix_exact = vec![0i128; n_max + 1];
        let mut prefix = vec![0.0; n_max + 1];
        let mut prefix_sq = vec![0.0; n_max + 1];
        let mut run: i128 = 0;
        let mut run_sq: i128 = 0;
        let mut run_sq_float = CompensatedSum::new();
        let inv_scale = 1.0 / scale as f64;
        for n in 1..=n_max {
            let v = exact[n];
            values[n] = normalize(n, v);
            run = run
                .checked_add(v)
                .ok_or_else(|| Error::ExactOverflow(format!("prefix sum at n = {n}")))?;
            prefix_exact[n] = run;
            if exact_squares {
                prefix[n] = run as f64 * inv_scale;
                run_sq = v
                    .checked_mul(v)
                    .and_then(|sq| run_sq.checked_add(sq))
                    .ok_or_else(|| Error::ExactOverflow(format!("squared prefix sum at n = {n}")))?;
                prefix_sq[n] = run_sq as f64 * inv_scale * inv_scale;
            } else {
                run_sq_float.add(values[n] * values[n]);
                prefix_sq[n] = run_sq_float.value();
            }
        }
        if !exact_squares {
            let mut s = CompensatedSum::new();
            for n in 1..=n_max {
                s.add(values[n]);
                prefix[n] = s.value();
            }
        }
        Ok(CoefficientTable {
            descriptor_id,
            n_max,
            exact: Some(ExactBacking {
                scale,
                values: exact,
                prefix: prefix_exact,
            }),
            values,
            prefix,
            prefix_sq,
        })
    }

    /// Table from floating values `lambda[0..n_max]` = lambda(1..=n_max).
    pub fn from_values(descriptor_id: impl Into<String>, lambda: &[f64]) -> Self {
        let n_max = lambda.len();
        let mut values = vec![0.0; n_max + 1];
        values[1..].copy_from_slice(lambda);
        let mut prefix = vec![0.0; n_max + 1];
        let mut prefix_sq = vec![0.0; n_max + 1];
        let mut s = CompensatedSum::new();
        let mut s2 = CompensatedSum::new();
        for n in 1..=n_max {
            s.add(values[n]);
            s2.add(values[n] * values[n]);
            prefix[n] = s.value();
            prefix_sq[n] = s2.value();
        }
        CoefficientTable {
            descriptor_id: descriptor_id.into(),
            n_max,
            exact: None,
            values,
            prefix,
            prefix_sq,
        }
    }

    /// lambda(n) for 1 <= n <= n_max.
    #[inline]
    pub fn lambda(&self, n: usize) -> f64 {
        self.values[n]
    }

    /// lambda(1..=n_max).
    pub fn values(&self) -> &[f64] {
        &self.values[1..]
    }

    /// Scaled exact integers `scale * lambda(1..=n_max)`, when present.
    pub fn values_exact(&self) -> Option<&[i128]> {
        self.exact.as_ref().map(|e| &e.values[1..])
    }

    pub fn exact_scale(&self) -> Option<i128> {
        self.exact.as_ref().map(|e| e.scale)
    }

    /// Sums over n <= T for T = 1..=n_max.
    pub fn prefix_lambda(&self) -> &[f64] {
        &self.prefix[1..]
    }

    pub fn prefix_lambda_sq(&self) -> &[f64] {
        &self.prefix_sq[1..]
    }

    /// Sum of lambda(n) over n <= t (t <= n_max).
    #[inline]
    pub fn prefix_lambda_at(&self, t: usize) -> f64 {
        self.prefix[t]
    }

    /// Sum of lambda(n)^2 over n <= t (t <= n_max).
    #[inline]
    pub fn sum_sq_through(&self, t: usize) -> f64 {
        self.prefix_sq[t]
    }

    /// Scaled exact sum `scale * sum_{n<=t} lambda(n)`.
    pub fn summatory_exact_scaled(&self, t: usize) -> Option<i128> {
        if t > self.n_max {
            return None;
        }
        self.exact.as_ref().map(|e| e.prefix[t])
    }

    pub fn metadata(&self) -> TableMetadata {
        TableMetadata {
            descriptor_id: self.descriptor_id.clone(),
            n_max: self.n_max,
            checksum: format!("{:016x}", fnv1a(self.values())),
        }
    }
}

fn fnv1a(values: &[f64]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for v in values {
        for b in v.to_bits().to_le_bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
    }
    h
}

/// prefix_lambda[floor(T)]; exact (as a float) whenever the table has exact backing.
pub fn summatory_direct(table: &CoefficientTable, t: f64) -> Result<f64> {
    if !(t >= 0.0) || t.floor() > table.n_max as f64 {
        return Err(Error::OutOfRange {
            t,
            limit: table.n_max as f64,
        });
    }
    let i = t.floor() as usize;
    Ok(table.prefix[i])
}
