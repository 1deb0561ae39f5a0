//! Reoptimization when the pattern grows from `l` to `l + k`.
//!
//! Every occurrence of a given length-`l` optimum is widened to length
//! `l + k` by taking `x` symbols on the left and `k - x` on the right. All
//! combinations are tried; each extended tuple is priced against its own
//! column consensus.

use crate::cost::{best_occurrence, evaluate, solution_for_windows, Consensus};
use crate::error::{Error, Result};
use crate::exec::{check_budget, fold_chunks, min_opt, Odometer, SolverConfig};
use crate::model::{Instance, Occurrence, Pattern, Solution};
use crate::ptas::{self, SampleMode};

/// An instance plus a length-`l` solution to be grown by `k`.
#[derive(Clone, Debug)]
pub struct ReoptInput<'a> {
    instance: &'a Instance,
    given: Pattern,
    occurrences: Vec<Occurrence>,
    k: usize,
    certified: bool,
}

impl<'a> ReoptInput<'a> {
    /// Uses the leftmost best occurrences of `given` in every sequence.
    pub fn new(instance: &'a Instance, given: Pattern, k: usize) -> Result<Self> {
        let occurrences = (0..instance.t())
            .map(|i| best_occurrence(&given, i, instance).map(|(o, _)| o))
            .collect::<Result<Vec<_>>>()?;
        Self::with_occurrences(instance, given, occurrences, k)
    }

    pub fn with_occurrences(
        instance: &'a Instance,
        given: Pattern,
        occurrences: Vec<Occurrence>,
        k: usize,
    ) -> Result<Self> {
        let l = given.len();
        instance.check_length(l)?;
        if k == 0 {
            return Err(Error::InvalidParameter("k must be positive".into()));
        }
        if l + k > instance.n() {
            return Err(Error::InvalidParameter(format!(
                "l + k = {} exceeds sequence length {}",
                l + k,
                instance.n()
            )));
        }
        if occurrences.len() != instance.t() {
            return Err(Error::LengthMismatch {
                left: occurrences.len(),
                right: instance.t(),
            });
        }
        for (i, o) in occurrences.iter().enumerate() {
            if o.seq_index != i || o.length != l || o.start + l > instance.n() {
                return Err(Error::InvalidParameter(format!(
                    "occurrence {i} ({o:?}) does not fit a length-{l} pattern"
                )));
            }
        }
        Ok(ReoptInput {
            instance,
            given,
            occurrences,
            k,
            certified: false,
        })
    }

    /// Marks the given pattern as a proven optimum for its length.
    pub fn certified(mut self, yes: bool) -> Self {
        self.certified = yes;
        self
    }

    pub fn is_certified(&self) -> bool {
        self.certified
    }

    pub fn instance(&self) -> &'a Instance {
        self.instance
    }

    pub fn given(&self) -> &Pattern {
        &self.given
    }

    pub fn occurrences(&self) -> &[Occurrence] {
        &self.occurrences
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Length of the given pattern.
    pub fn l(&self) -> usize {
        self.given.len()
    }

    /// Length of the patterns produced.
    pub fn target_len(&self) -> usize {
        self.l() + self.k
    }

    /// Feasible left-extension counts for occurrence `i`, inclusive.
    pub fn extension_range(&self, i: usize) -> (usize, usize) {
        let s = self.occurrences[i].start;
        let lo = (s + self.target_len()).saturating_sub(self.instance.n());
        let hi = self.k.min(s);
        (lo, hi)
    }

    /// Start positions of every length-`l + k` window K-EXTEND can take
    /// from occurrence `i`.
    pub fn extension_starts(&self, i: usize) -> impl Iterator<Item = usize> {
        let s = self.occurrences[i].start;
        let (lo, hi) = self.extension_range(i);
        (lo..=hi).rev().map(move |x| s - x)
    }
}

/// Left-extension counts, one per occurrence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionVector(pub Vec<usize>);

impl ExtensionVector {
    /// Window starts after extending, or `None` if some entry is infeasible.
    pub fn window_starts(&self, input: &ReoptInput<'_>) -> Option<Vec<usize>> {
        if self.0.len() != input.instance.t() {
            return None;
        }
        self.0
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                let (lo, hi) = input.extension_range(i);
                (lo..=hi)
                    .contains(&x)
                    .then(|| input.occurrences[i].start - x)
            })
            .collect()
    }
}

#[derive(PartialEq, Eq, PartialOrd, Ord)]
struct Best {
    cost: u64,
    pattern: Vec<u8>,
    starts: Vec<usize>,
}

/// Shared scan: `choose(i, digit)` maps the odometer digit of occurrence
/// `i` to a window start.
fn best_extension<F>(input: &ReoptInput<'_>, radices: &[u64], cfg: &SolverConfig, choose: F) -> Result<Solution>
where
    F: Fn(usize, u64) -> usize + Sync,
{
    let instance = input.instance;
    let len = input.target_len();
    let total = check_budget("extension", Odometer::space(radices), cfg.budget)?;
    let sigma = instance.alphabet().size();

    let best = fold_chunks(
        cfg.exec,
        total,
        |range| {
            let mut odo = Odometer::at(radices, range.start);
            let mut consensus = Consensus::new(sigma);
            let mut pattern = Vec::with_capacity(len);
            let mut starts = vec![0usize; instance.t()];
            let mut best: Option<Best> = None;
            for _ in range {
                for (i, (s, &d)) in starts.iter_mut().zip(odo.digits()).enumerate() {
                    *s = choose(i, d);
                }
                let rows = starts
                    .iter()
                    .enumerate()
                    .map(|(i, &s)| instance.window(i, s, len));
                let cost = consensus.compute(rows, len, &mut pattern);
                let better = match &best {
                    None => true,
                    Some(b) => (cost, &pattern[..], &starts[..]) < (b.cost, &b.pattern[..], &b.starts[..]),
                };
                if better {
                    best = Some(Best {
                        cost,
                        pattern: pattern.clone(),
                        starts: starts.clone(),
                    });
                }
                odo.advance();
            }
            best
        },
        min_opt,
    )
    .flatten()
    .expect("extension space is non-empty");

    Ok(solution_for_windows(best.pattern, &best.starts, instance))
}

/// Grows every occurrence by one symbol, to the left or to the right, over
/// all `2^t` choices. An occurrence touching a sequence edge only grows
/// inwards.
pub fn extend(input: &ReoptInput<'_>, cfg: &SolverConfig) -> Result<Solution> {
    if input.k != 1 {
        return Err(Error::InvalidParameter(format!(
            "extend grows by exactly one symbol, got k = {}",
            input.k
        )));
    }
    let radices = vec![2u64; input.instance.t()];
    best_extension(input, &radices, cfg, |i, bit| {
        let s = input.occurrences[i].start;
        let (lo, hi) = input.extension_range(i);
        // bit 1 = left, 0 = right; fall back to the other side when blocked
        let left = if bit == 1 { hi } else { lo };
        s - left
    })
}

/// Grows every occurrence by `k` symbols split between both sides, over all
/// feasible `(k + 1)^t` splits.
pub fn k_extend(input: &ReoptInput<'_>, cfg: &SolverConfig) -> Result<Solution> {
    let t = input.instance.t();
    let ranges: Vec<(usize, usize)> = (0..t).map(|i| input.extension_range(i)).collect();
    let radices: Vec<u64> = ranges.iter().map(|&(lo, hi)| (hi - lo + 1) as u64).collect();
    best_extension(input, &radices, cfg, |i, d| {
        input.occurrences[i].start - (ranges[i].0 + d as usize)
    })
}

/// Cheapest candidate under the solution order.
pub fn best_of(candidates: impl IntoIterator<Item = Solution>) -> Result<Solution> {
    candidates
        .into_iter()
        .min()
        .ok_or(Error::Empty("best_of needs at least one candidate"))
}

/// Whether growing a known optimum is predicted to beat a
/// `sigma`-approximation run from scratch: `t - 1 < (sigma - 1) * opt`.
pub fn advantage_predicate(t: usize, sigma: f64, opt_cost: u64) -> bool {
    (t as f64 - 1.0) < (sigma - 1.0) * opt_cost as f64
}

/// The cheaper of K-EXTEND and the sampling approximation at length
/// `l + k`.
pub fn combined(
    input: &ReoptInput<'_>,
    r: usize,
    mode: SampleMode,
    cfg: &SolverConfig,
) -> Result<Solution> {
    let grown = k_extend(input, cfg)?;
    let sampled = ptas::ptas(input.instance, input.target_len(), r, mode, cfg)?;
    best_of([grown, sampled.solution])
}

/// Prices the given pattern against the instance, as the starting point
/// the extension bounds are measured from.
pub fn given_cost(input: &ReoptInput<'_>) -> Result<u64> {
    Ok(evaluate(&input.given, input.instance)?.cost)
}
