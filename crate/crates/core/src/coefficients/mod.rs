//! Coefficient sequences lambda(n), prefix sums and exact summatory oracles.

mod eta;
mod io;
mod oracles;
mod sieve;
mod table;

pub use eta::{eta24_coefficients, ETA24_MAX_N};
pub use io::{export_coefficients, load_coefficients, parse_coefficients, read_metadata, sidecar_path};
pub use oracles::{
    lattice_points_in_annulus, lattice_points_in_disc, summatory_gaussian_exact, summatory_tau2_hyperbola, summatory_tau3_hyperbola,
    QuarterInteger, Summatory,
};
pub use sieve::{sieve_gaussian_ideals, sieve_gaussian_lattice, sieve_tau_k, stream_lambda_squared};
pub use table::{summatory_direct, CoefficientTable, TableMetadata};

use crate::error::Result;
use crate::lfun::Builtin;

/// Coefficient table for a built-in family.
pub fn builtin_table(which: Builtin, n: usize) -> Result<CoefficientTable> {
    match which {
        Builtin::TauK(k) => sieve_tau_k(k, n),
        Builtin::GaussianIdeals => sieve_gaussian_ideals(n),
        Builtin::GaussianLattice => sieve_gaussian_lattice(n),
        Builtin::Ramanujan => eta24_coefficients(n),
    }
}
