//! Numerical building blocks shared by the analytic modules.

pub mod dd;
pub mod intmath;
pub mod primes;
pub mod quadrature;
pub mod sum;

pub use dd::Dd;
pub use sum::{pairwise_sum, CompensatedSum};
