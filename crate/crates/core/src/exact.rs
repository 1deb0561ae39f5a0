//! Exhaustive ground-truth solvers.
//!
//! Two independent routes to the optimum: enumerating every tuple of one
//! window per sequence (the best pattern for a fixed tuple is its column
//! consensus), or enumerating every pattern in `Σ^L` and pricing it with
//! best occurrences. Both refuse rather than truncate when the search space
//! exceeds the configured budget.

use std::fmt;
use std::str::FromStr;

use crate::cost::{cost_within, evaluate, solution_for_windows, Consensus};
use crate::error::{Error, Result};
use crate::exec::{check_budget, fold_chunks, min_opt, Odometer, SolverConfig};
use crate::model::{Instance, Pattern, Solution};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OracleKind {
    Alignment,
    Pattern,
}

impl OracleKind {
    pub fn name(self) -> &'static str {
        match self {
            OracleKind::Alignment => "exact-align",
            OracleKind::Pattern => "exact-pattern",
        }
    }

    /// Size of the space this oracle would enumerate.
    pub fn space(self, instance: &Instance, len: usize) -> Option<u128> {
        match self {
            OracleKind::Alignment => {
                Odometer::space(&vec![instance.windows_per_row(len) as u64; instance.t()])
            }
            OracleKind::Pattern => {
                Odometer::space(&vec![instance.alphabet().size() as u64; len])
            }
        }
    }
}

impl fmt::Display for OracleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for OracleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact-align" | "alignment" => Ok(OracleKind::Alignment),
            "exact-pattern" | "pattern" => Ok(OracleKind::Pattern),
            _ => Err(Error::InvalidParameter(format!("unknown oracle {s:?}"))),
        }
    }
}

pub fn solve(kind: OracleKind, instance: &Instance, len: usize, cfg: &SolverConfig) -> Result<Solution> {
    match kind {
        OracleKind::Alignment => solve_alignment(instance, len, cfg),
        OracleKind::Pattern => solve_pattern(instance, len, cfg),
    }
}

/// Runs whichever oracle has the smaller search space.
pub fn solve_cheapest(instance: &Instance, len: usize, cfg: &SolverConfig) -> Result<Solution> {
    instance.check_length(len)?;
    let align = OracleKind::Alignment.space(instance, len);
    let pattern = OracleKind::Pattern.space(instance, len);
    let kind = match (align, pattern) {
        (Some(a), Some(p)) if p < a => OracleKind::Pattern,
        (None, Some(_)) => OracleKind::Pattern,
        _ => OracleKind::Alignment,
    };
    solve(kind, instance, len, cfg)
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
struct AlignmentBest {
    cost: u64,
    pattern: Vec<u8>,
    starts: Vec<u64>,
}

/// Optimum over every alignment of one length-`len` window per sequence.
pub fn solve_alignment(instance: &Instance, len: usize, cfg: &SolverConfig) -> Result<Solution> {
    instance.check_length(len)?;
    let radices = vec![instance.windows_per_row(len) as u64; instance.t()];
    let total = check_budget("alignment", Odometer::space(&radices), cfg.budget)?;
    let sigma = instance.alphabet().size();

    let best = fold_chunks(
        cfg.exec,
        total,
        |range| {
            let mut odo = Odometer::at(&radices, range.start);
            let mut consensus = Consensus::new(sigma);
            let mut pattern = Vec::with_capacity(len);
            let mut best: Option<AlignmentBest> = None;
            for _ in range {
                let starts = odo.digits();
                let rows = starts
                    .iter()
                    .enumerate()
                    .map(|(i, &s)| instance.window(i, s as usize, len));
                let cost = consensus.compute(rows, len, &mut pattern);
                let better = match &best {
                    None => true,
                    Some(b) => (cost, &pattern[..], starts) < (b.cost, &b.pattern[..], &b.starts[..]),
                };
                if better {
                    best = Some(AlignmentBest {
                        cost,
                        pattern: pattern.clone(),
                        starts: starts.to_vec(),
                    });
                }
                odo.advance();
            }
            best
        },
        min_opt,
    )
    .flatten()
    .expect("alignment space is non-empty");

    let starts: Vec<usize> = best.starts.iter().map(|&s| s as usize).collect();
    let solution = solution_for_windows(best.pattern, &starts, instance);
    debug_assert_eq!(solution.cost, best.cost);
    Ok(solution)
}

/// Optimum over every pattern in `Σ^len`, each priced with its best
/// occurrences.
pub fn solve_pattern(instance: &Instance, len: usize, cfg: &SolverConfig) -> Result<Solution> {
    instance.check_length(len)?;
    let sigma = instance.alphabet().size();
    let radices = vec![sigma as u64; len];
    let total = check_budget("pattern", Odometer::space(&radices), cfg.budget)?;

    // Patterns are visited in ascending order inside a chunk, so only a
    // strictly smaller cost can replace the chunk's incumbent.
    let best = fold_chunks(
        cfg.exec,
        total,
        |range| {
            let mut odo = Odometer::at(&radices, range.start);
            let mut pattern = vec![0u8; len];
            let mut best: Option<(u64, Vec<u8>)> = None;
            for _ in range {
                for (p, &d) in pattern.iter_mut().zip(odo.digits()) {
                    *p = d as u8;
                }
                let limit = match &best {
                    Some((0, _)) => break,
                    Some((c, _)) => c - 1,
                    None => u64::MAX,
                };
                if let Some(cost) = cost_within(&pattern, instance, limit) {
                    best = Some((cost, pattern.clone()));
                }
                odo.advance();
            }
            best
        },
        min_opt,
    )
    .flatten()
    .expect("pattern space is non-empty");

    let solution = evaluate(&Pattern::from_ranks_unchecked(best.1), instance)?;
    debug_assert_eq!(solution.cost, best.0);
    Ok(solution)
}
