//! Alphabet, instance, pattern and solution types.
//!
//! Sequences and patterns are stored as symbol ranks (`u8` indices into the
//! alphabet), so comparing two patterns lexicographically compares them in
//! alphabet order.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

const NO_RANK: u8 = u8::MAX;

/// An ordered set of single-byte symbols.
#[derive(Clone)]
pub struct Alphabet {
    symbols: Vec<u8>,
    ranks: [u8; 256],
}

impl Alphabet {
    /// Builds an alphabet from its symbols in rank order.
    pub fn new(symbols: &str) -> Result<Self> {
        let bytes = symbols.as_bytes();
        if bytes.len() < 2 {
            return Err(Error::InvalidAlphabet(format!(
                "need at least 2 symbols, got {:?}",
                symbols
            )));
        }
        let mut ranks = [NO_RANK; 256];
        for (rank, &b) in bytes.iter().enumerate() {
            if !b.is_ascii_graphic() {
                return Err(Error::InvalidAlphabet(format!(
                    "symbol {:?} is not a printable ASCII character",
                    b as char
                )));
            }
            if ranks[b as usize] != NO_RANK {
                return Err(Error::InvalidAlphabet(format!(
                    "duplicate symbol {:?}",
                    b as char
                )));
            }
            ranks[b as usize] = rank as u8;
        }
        Ok(Alphabet {
            symbols: bytes.to_vec(),
            ranks,
        })
    }

    pub fn size(&self) -> usize {
        self.symbols.len()
    }

    pub fn symbols(&self) -> &str {
        // Only ASCII bytes are admitted by `new`.
        std::str::from_utf8(&self.symbols).expect("alphabet is ASCII")
    }

    pub fn rank(&self, symbol: u8) -> Option<u8> {
        match self.ranks[symbol as usize] {
            NO_RANK => None,
            r => Some(r),
        }
    }

    pub fn symbol(&self, rank: u8) -> u8 {
        self.symbols[rank as usize]
    }

    pub fn encode(&self, text: &str) -> Result<Vec<u8>> {
        text.chars()
            .map(|c| {
                if c.is_ascii() {
                    self.rank(c as u8).ok_or(Error::UnknownSymbol(c))
                } else {
                    Err(Error::UnknownSymbol(c))
                }
            })
            .collect()
    }

    pub fn decode(&self, ranks: &[u8]) -> String {
        ranks.iter().map(|&r| self.symbol(r) as char).collect()
    }
}

impl PartialEq for Alphabet {
    fn eq(&self, other: &Self) -> bool {
        self.symbols == other.symbols
    }
}

impl Eq for Alphabet {}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("Alphabet").field(&self.symbols()).finish()
    }
}

/// `t` sequences of common length `n` over one alphabet.
#[derive(Clone, PartialEq, Eq)]
pub struct Instance {
    alphabet: Alphabet,
    rows: Vec<Vec<u8>>,
    n: usize,
}

impl Instance {
    pub fn new<S: AsRef<str>>(alphabet: Alphabet, sequences: &[S]) -> Result<Self> {
        let rows = sequences
            .iter()
            .map(|s| alphabet.encode(s.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Self::from_ranks(alphabet, rows)
    }

    pub fn from_ranks(alphabet: Alphabet, rows: Vec<Vec<u8>>) -> Result<Self> {
        let first = rows.first().ok_or(Error::Empty("instance has no sequences"))?;
        let n = first.len();
        if n == 0 {
            return Err(Error::Empty("sequences are empty"));
        }
        for (index, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Ragged {
                    index,
                    expected: n,
                    found: row.len(),
                });
            }
            if let Some(&bad) = row.iter().find(|&&r| r as usize >= alphabet.size()) {
                return Err(Error::InvalidParameter(format!(
                    "rank {bad} out of range for alphabet of size {}",
                    alphabet.size()
                )));
            }
        }
        Ok(Instance { alphabet, rows, n })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// Number of sequences.
    pub fn t(&self) -> usize {
        self.rows.len()
    }

    /// Common sequence length.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> &[u8] {
        &self.rows[i]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u8]> {
        self.rows.iter().map(Vec::as_slice)
    }

    pub fn window(&self, seq: usize, start: usize, len: usize) -> &[u8] {
        &self.rows[seq][start..start + len]
    }

    pub fn sequence_text(&self, i: usize) -> String {
        self.alphabet.decode(&self.rows[i])
    }

    /// Number of length-`len` windows per sequence; zero if `len > n`.
    pub fn windows_per_row(&self, len: usize) -> usize {
        (self.n + 1).saturating_sub(len)
    }

    pub(crate) fn check_length(&self, len: usize) -> Result<()> {
        if len == 0 || len > self.n {
            return Err(Error::BadLength { len, n: self.n });
        }
        Ok(())
    }
}

impl fmt::Debug for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.t()).map(|i| self.sequence_text(i)).collect();
        f.debug_struct("Instance")
            .field("alphabet", &self.alphabet)
            .field("rows", &rows)
            .finish()
    }
}

/// A candidate pattern, stored as symbol ranks.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pattern(Vec<u8>);

impl Pattern {
    pub fn from_ranks(ranks: Vec<u8>) -> Result<Self> {
        if ranks.is_empty() {
            return Err(Error::Empty("pattern"));
        }
        Ok(Pattern(ranks))
    }

    pub fn from_text(alphabet: &Alphabet, text: &str) -> Result<Self> {
        Self::from_ranks(alphabet.encode(text)?)
    }

    pub(crate) fn from_ranks_unchecked(ranks: Vec<u8>) -> Self {
        debug_assert!(!ranks.is_empty());
        Pattern(ranks)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn ranks(&self) -> &[u8] {
        &self.0
    }

    pub fn text(&self, alphabet: &Alphabet) -> String {
        alphabet.decode(&self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Occurrence {
    pub seq_index: usize,
    pub start: usize,
    pub length: usize,
}

impl Occurrence {
    pub fn new(seq_index: usize, start: usize, length: usize) -> Self {
        Occurrence {
            seq_index,
            start,
            length,
        }
    }
}

/// A pattern, one occurrence per sequence, and the total Hamming distance
/// between them.
///
/// Solutions are totally ordered by `(cost, pattern, occurrence starts)`;
/// every solver reports the minimum under this order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub pattern: Pattern,
    pub occurrences: Vec<Occurrence>,
    pub cost: u64,
}

impl Solution {
    pub fn starts(&self) -> impl Iterator<Item = usize> + '_ {
        self.occurrences.iter().map(|o| o.start)
    }

    /// Recomputes the cost from the pattern and occurrences.
    pub fn recompute_cost(&self, instance: &Instance) -> Result<u64> {
        let len = self.pattern.len();
        instance.check_length(len)?;
        if self.occurrences.len() != instance.t() {
            return Err(Error::LengthMismatch {
                left: self.occurrences.len(),
                right: instance.t(),
            });
        }
        let mut total = 0u64;
        for (i, occ) in self.occurrences.iter().enumerate() {
            if occ.seq_index != i || occ.length != len || occ.start + len > instance.n() {
                return Err(Error::InvalidParameter(format!(
                    "occurrence {i} ({occ:?}) is inconsistent with a length-{len} pattern"
                )));
            }
            total += crate::cost::hamming(
                self.pattern.ranks(),
                instance.window(i, occ.start, len),
            )? as u64;
        }
        Ok(total)
    }

    /// Checks the stored cost against a recomputation.
    pub fn verify(&self, instance: &Instance) -> Result<()> {
        let actual = self.recompute_cost(instance)?;
        if actual != self.cost {
            return Err(Error::CostMismatch {
                stored: self.cost,
                actual,
            });
        }
        Ok(())
    }
}

impl Ord for Solution {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cost
            .cmp(&other.cost)
            .then_with(|| self.pattern.cmp(&other.pattern))
            .then_with(|| self.starts().cmp(other.starts()))
    }
}

impl PartialOrd for Solution {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alphabet_rejects_duplicates_and_singletons() {
        assert!(Alphabet::new("AA").is_err());
        assert!(Alphabet::new("A").is_err());
        assert!(Alphabet::new("A B").is_err());
        let a = Alphabet::new("ABxyz").unwrap();
        assert_eq!(a.size(), 5);
        assert_eq!(a.rank(b'x'), Some(2));
        assert_eq!(a.rank(b'q'), None);
    }

    #[test]
    fn instance_rejects_ragged_rows_and_unknown_symbols() {
        let a = Alphabet::new("AB").unwrap();
        assert!(matches!(
            Instance::new(a.clone(), &["AB", "ABA"]),
            Err(Error::Ragged { index: 1, .. })
        ));
        assert!(matches!(
            Instance::new(a.clone(), &["AB", "AC"]),
            Err(Error::UnknownSymbol('C'))
        ));
        assert!(Instance::new(a, &[] as &[&str]).is_err());
    }

    #[test]
    fn solution_order_is_cost_then_pattern_then_starts() {
        let mk = |cost, p: &[u8], s: &[usize]| Solution {
            pattern: Pattern::from_ranks_unchecked(p.to_vec()),
            occurrences: s
                .iter()
                .enumerate()
                .map(|(i, &st)| Occurrence::new(i, st, p.len()))
                .collect(),
            cost,
        };
        assert!(mk(1, &[1, 1], &[0]) < mk(2, &[0, 0], &[0]));
        assert!(mk(1, &[0, 1], &[3]) < mk(1, &[1, 0], &[0]));
        assert!(mk(1, &[0, 1], &[0, 2]) < mk(1, &[0, 1], &[1, 0]));
    }
}
