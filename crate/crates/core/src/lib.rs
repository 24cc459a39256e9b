//! Numerical laboratory for short-interval sums of L-function coefficients.
//!
//! For an L-function of degree m with coefficients lambda(n), the remainder
//! Delta(x) = sum_{n<=x} lambda(n) - Res_{s=1} L(s) x^s / s is computed exactly
//! (through closed-form summatory oracles or prefix sums), approximated by
//! truncated Voronoi dual sums, and the normalised short-interval difference
//! (Delta((x+delta)^m) - Delta(x^m)) / (x^{(m-1)/2} sigma(delta)) is sampled and
//! compared with the standard Gaussian.
//!
//! Modules:
//! - [`lfun`]: descriptors, Laurent series and the residue main term
//! - [`coefficients`]: sieves, tables and exact summatory oracles
//! - [`voronoi`]: exact remainders, dual sums, phase and L2 diagnostics
//! - [`variance`]: predicted and truncated variances, Rankin-Selberg constants
//! - [`algebra`]: power-free kernels, exact zero detection, diagonal moments
//! - [`stats`]: sampling, windowed expectations, moments and KS

pub mod algebra;
pub mod coefficients;
pub mod error;
pub mod lfun;
pub mod numeric;
pub mod stats;
pub mod variance;
pub mod voronoi;

pub use error::{Error, Result};

/// Version of this crate, recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
