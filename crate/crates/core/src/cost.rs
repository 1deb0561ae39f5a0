//! The Hamming cost model: distances, column-majority consensus, and
//! best-occurrence evaluation.

use crate::error::{Error, Result};
use crate::model::{Alphabet, Instance, Occurrence, Pattern, Solution};

/// Number of positions at which `a` and `b` differ.
pub fn hamming(a: &[u8], b: &[u8]) -> Result<usize> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(distance(a, b) as usize)
}

/// Hamming distance between two strings written over `alphabet`.
pub fn hamming_text(alphabet: &Alphabet, a: &str, b: &str) -> Result<usize> {
    hamming(&alphabet.encode(a)?, &alphabet.encode(b)?)
}

#[inline]
pub(crate) fn distance(a: &[u8], b: &[u8]) -> u64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).filter(|(x, y)| x != y).count() as u64
}

/// Distance with early exit once `limit` is reached; the result is exact
/// whenever it is below `limit`.
#[inline]
fn distance_capped(a: &[u8], b: &[u8], limit: u64) -> u64 {
    let mut d = 0;
    for (x, y) in a.iter().zip(b) {
        if x != y {
            d += 1;
            if d >= limit {
                return d;
            }
        }
    }
    d
}

/// Column-majority consensus over rank-encoded strings.
///
/// Reuses its count buffer across calls; the hot loops of every solver go
/// through here.
pub(crate) struct Consensus {
    sigma: usize,
    counts: Vec<u32>,
}

impl Consensus {
    pub(crate) fn new(sigma: usize) -> Self {
        Consensus {
            sigma,
            counts: vec![0; sigma],
        }
    }

    /// Writes the consensus of `rows` into `out` and returns
    /// `Σ_i d(out, rows[i])`.
    pub(crate) fn compute<'a, I>(&mut self, rows: I, len: usize, out: &mut Vec<u8>) -> u64
    where
        I: Iterator<Item = &'a [u8]> + Clone,
    {
        out.clear();
        let mut cost = 0u64;
        for col in 0..len {
            self.counts.iter_mut().for_each(|c| *c = 0);
            let mut rows_seen = 0u32;
            for row in rows.clone() {
                self.counts[row[col] as usize] += 1;
                rows_seen += 1;
            }
            // Strict `>` keeps the lowest rank on ties.
            let mut best = 0usize;
            for s in 1..self.sigma {
                if self.counts[s] > self.counts[best] {
                    best = s;
                }
            }
            out.push(best as u8);
            cost += u64::from(rows_seen - self.counts[best]);
        }
        cost
    }
}

/// Column-majority consensus of equal-length strings; ties go to the symbol
/// that comes first in `alphabet`.
pub fn consensus<S: AsRef<str>>(strings: &[S], alphabet: &Alphabet) -> Result<Pattern> {
    let rows = strings
        .iter()
        .map(|s| alphabet.encode(s.as_ref()))
        .collect::<Result<Vec<_>>>()?;
    let slices: Vec<&[u8]> = rows.iter().map(Vec::as_slice).collect();
    consensus_ranks(&slices, alphabet.size())
}

/// [`consensus`] over rank-encoded strings.
pub fn consensus_ranks(rows: &[&[u8]], sigma: usize) -> Result<Pattern> {
    let first = rows.first().ok_or(Error::Empty("consensus of no strings"))?;
    let len = first.len();
    if len == 0 {
        return Err(Error::Empty("consensus of empty strings"));
    }
    for (index, row) in rows.iter().enumerate() {
        if row.len() != len {
            return Err(Error::Ragged {
                index,
                expected: len,
                found: row.len(),
            });
        }
        if row.iter().any(|&r| r as usize >= sigma) {
            return Err(Error::InvalidParameter(format!(
                "string {index} has a rank outside an alphabet of size {sigma}"
            )));
        }
    }
    let mut out = Vec::with_capacity(len);
    Consensus::new(sigma).compute(rows.iter().copied(), len, &mut out);
    Ok(Pattern::from_ranks_unchecked(out))
}

/// Leftmost start minimizing the distance to `pattern` in `row`.
#[inline]
pub(crate) fn closest_window(pattern: &[u8], row: &[u8]) -> (usize, u64) {
    let len = pattern.len();
    let mut best = (0, u64::MAX);
    for start in 0..=row.len() - len {
        let d = distance_capped(pattern, &row[start..start + len], best.1);
        if d < best.1 {
            best = (start, d);
            if d == 0 {
                break;
            }
        }
    }
    best
}

/// Total cost of `pattern` against `instance`, abandoning the sum once it
/// exceeds `limit`. Returns `None` when abandoned.
pub(crate) fn cost_within(pattern: &[u8], instance: &Instance, limit: u64) -> Option<u64> {
    let mut total = 0u64;
    for row in instance.rows() {
        total += closest_window(pattern, row).1;
        if total > limit {
            return None;
        }
    }
    Some(total)
}

/// The occurrence of `pattern` in sequence `seq_index` with the smallest
/// distance, leftmost on ties.
pub fn best_occurrence(
    pattern: &Pattern,
    seq_index: usize,
    instance: &Instance,
) -> Result<(Occurrence, u64)> {
    instance.check_length(pattern.len())?;
    if seq_index >= instance.t() {
        return Err(Error::InvalidParameter(format!(
            "sequence index {seq_index} out of range for t = {}",
            instance.t()
        )));
    }
    let (start, d) = closest_window(pattern.ranks(), instance.row(seq_index));
    Ok((Occurrence::new(seq_index, start, pattern.len()), d))
}

/// Scores `pattern` against every sequence using its best occurrences.
pub fn evaluate(pattern: &Pattern, instance: &Instance) -> Result<Solution> {
    instance.check_length(pattern.len())?;
    if pattern.ranks().iter().any(|&r| r as usize >= instance.alphabet().size()) {
        return Err(Error::InvalidParameter(
            "pattern uses ranks outside the instance alphabet".into(),
        ));
    }
    let mut occurrences = Vec::with_capacity(instance.t());
    let mut cost = 0;
    for i in 0..instance.t() {
        let (occ, d) = best_occurrence(pattern, i, instance)?;
        occurrences.push(occ);
        cost += d;
    }
    Ok(Solution {
        pattern: pattern.clone(),
        occurrences,
        cost,
    })
}

/// Builds a solution from a pattern and explicit window starts, pricing the
/// pattern against exactly those windows.
pub(crate) fn solution_for_windows(pattern: Vec<u8>, starts: &[usize], instance: &Instance) -> Solution {
    let len = pattern.len();
    let cost = starts
        .iter()
        .enumerate()
        .map(|(i, &s)| distance(&pattern, instance.window(i, s, len)))
        .sum();
    Solution {
        pattern: Pattern::from_ranks_unchecked(pattern),
        occurrences: starts
            .iter()
            .enumerate()
            .map(|(i, &s)| Occurrence::new(i, s, len))
            .collect(),
        cost,
    }
}
