//! Execution policy and the chunked reductions every enumerating solver
//! runs on.
//!
//! Results never depend on the policy or on the worker count: the
//! reductions only combine values with associative, commutative operators
//! (min under a total order, sums).

use std::ops::Range;

/// Default limit on enumerated candidates for exponential searches.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    /// Runs on the current rayon pool. Falls back to sequential when the
    /// crate is built without the `parallel` feature.
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolverConfig {
    pub budget: u64,
    pub exec: Exec,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            budget: DEFAULT_BUDGET,
            exec: Exec::default(),
        }
    }
}

impl SolverConfig {
    pub fn sequential() -> Self {
        SolverConfig {
            exec: Exec::Sequential,
            ..Self::default()
        }
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    pub fn with_exec(mut self, exec: Exec) -> Self {
        self.exec = exec;
        self
    }
}

const CHUNKS_PER_THREAD: u64 = 16;
const MIN_CHUNK: u64 = 256;

fn chunk_size(total: u64) -> u64 {
    #[cfg(feature = "parallel")]
    let workers = rayon::current_num_threads() as u64;
    #[cfg(not(feature = "parallel"))]
    let workers = 1u64;
    (total / (workers * CHUNKS_PER_THREAD)).max(MIN_CHUNK)
}

/// Splits `0..total` into contiguous chunks, maps each, and folds the
/// results with `reduce`. Returns `None` when `total == 0`.
pub(crate) fn fold_chunks<A, M, R>(exec: Exec, total: u64, map: M, reduce: R) -> Option<A>
where
    A: Send,
    M: Fn(Range<u64>) -> A + Sync,
    R: Fn(A, A) -> A + Sync,
{
    if total == 0 {
        return None;
    }
    let size = chunk_size(total);
    let chunks = total.div_ceil(size);
    let range_of = |c: u64| c * size..((c + 1) * size).min(total);
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel if chunks > 1 => {
            use rayon::prelude::*;
            (0..chunks)
                .into_par_iter()
                .map(|c| map(range_of(c)))
                .reduce_with(&reduce)
        }
        _ => (0..chunks).map(|c| map(range_of(c))).reduce(&reduce),
    }
}

/// `Some` minimum of two optional candidates.
pub(crate) fn min_opt<T: Ord>(a: Option<T>, b: Option<T>) -> Option<T> {
    match (a, b) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, None) => a,
        (None, b) => b,
    }
}

/// Mixed-radix odometer; digit 0 is the most significant, so increasing
/// the counter walks tuples in lexicographic order.
#[derive(Clone, Debug)]
pub(crate) struct Odometer {
    radices: Vec<u64>,
    digits: Vec<u64>,
}

impl Odometer {
    /// Product of the radices, or `None` on `u128` overflow.
    pub(crate) fn space(radices: &[u64]) -> Option<u128> {
        radices
            .iter()
            .try_fold(1u128, |acc, &r| acc.checked_mul(u128::from(r)))
    }

    pub(crate) fn at(radices: &[u64], mut index: u64) -> Self {
        let mut digits = vec![0; radices.len()];
        for (d, &r) in digits.iter_mut().zip(radices).rev() {
            *d = index % r;
            index /= r;
        }
        Odometer {
            radices: radices.to_vec(),
            digits,
        }
    }

    pub(crate) fn digits(&self) -> &[u64] {
        &self.digits
    }

    pub(crate) fn advance(&mut self) {
        for (d, &r) in self.digits.iter_mut().zip(&self.radices).rev() {
            *d += 1;
            if *d < r {
                return;
            }
            *d = 0;
        }
    }
}

pub(crate) fn check_budget(oracle: &'static str, required: Option<u128>, budget: u64) -> crate::Result<u64> {
    match required {
        Some(n) if n <= u128::from(budget) => Ok(n as u64),
        other => Err(crate::Error::BudgetExceeded {
            oracle,
            required: other.unwrap_or(u128::MAX),
            budget,
        }),
    }
}
