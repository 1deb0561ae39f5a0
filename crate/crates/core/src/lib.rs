//! Solvers for the closest substring (consensus pattern) problem under the
//! sum-of-Hamming-distances objective, and for reoptimizing a known
//! length-`l` optimum into a length-`l + k` solution.
//!
//! - [`cost`]: distances, consensus, best occurrences.
//! - [`exact`]: exhaustive oracles.
//! - [`reopt`]: EXTEND / K-EXTEND and the best-of combiner.
//! - [`ptas`]: r-sample search and its flank-pruned variant.
//! - [`instances`]: generators and file formats.
//! - [`bench`]: grid runner producing CSV reports.
//!
//! Enumerations run on rayon when the `parallel` feature is on (default);
//! results are identical for any worker count.

pub mod bench;
pub mod cost;
mod error;
pub mod exact;
pub mod exec;
pub mod instances;
pub mod model;
pub mod ptas;
pub mod reopt;

pub use error::{Error, Result};
pub use exec::{Exec, SolverConfig};
pub use model::{Alphabet, Instance, Occurrence, Pattern, Solution};
