use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cost::evaluate;
use crate::error::{Error, Result};
use crate::model::{Alphabet, Instance, Pattern, Solution};

/// Symbols standing in for the per-sequence markers of the extension
/// hard family, in the order they are assigned to sequences.
pub const CLAIM_MARKERS: &str = "xyzabcdefghijklmnopqrstuvwCDEFGHIJKLMNOPQRSTUVWXYZ0123456789";

const PLAIN_SYMBOLS: &str = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789";

/// Generator name and the parameters that determine its output.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Provenance {
    pub generator: String,
    pub params: Vec<(String, u64)>,
}

impl Provenance {
    fn new(generator: &str, params: &[(&str, u64)]) -> Self {
        Provenance {
            generator: generator.to_string(),
            params: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
        }
    }

    pub fn param(&self, name: &str) -> Option<u64> {
        self.params.iter().find(|(k, _)| k == name).map(|(_, v)| *v)
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.generator)?;
        for (i, (k, v)) in self.params.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{k}={v}")?;
        }
        f.write_str(")")
    }
}

/// A solution known by construction. `optimal` is true only when the
/// construction proves optimality; otherwise it is an upper bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certified {
    pub len: usize,
    pub solution: Solution,
    pub optimal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledInstance {
    pub instance: Instance,
    pub certified: Vec<Certified>,
    pub provenance: Provenance,
}

impl LabeledInstance {
    pub fn certified_at(&self, len: usize) -> Option<&Certified> {
        self.certified.iter().find(|c| c.len == len)
    }
}

fn certify(instance: &Instance, ranks: Vec<u8>, optimal: bool) -> Result<Certified> {
    let pattern = Pattern::from_ranks(ranks)?;
    let solution = evaluate(&pattern, instance)?;
    Ok(Certified {
        len: pattern.len(),
        solution,
        optimal,
    })
}

/// Hard family for one-symbol extension: sequence `i` is
/// `α_i B^l α_i A^(l-1) A A`, except the first, which ends `A^(l-1) B A`.
/// `B^l` is a certified zero-cost optimum at length `l`.
pub fn gen_claim1(t: usize, l: usize) -> Result<LabeledInstance> {
    if t < 2 || l < 1 {
        return Err(Error::InvalidParameter(format!(
            "claim1 needs t >= 2 and l >= 1, got t = {t}, l = {l}"
        )));
    }
    if t > CLAIM_MARKERS.len() {
        return Err(Error::InvalidParameter(format!(
            "claim1 supports t <= {}, got {t}",
            CLAIM_MARKERS.len()
        )));
    }
    let symbols = format!("AB{}", &CLAIM_MARKERS[..t]);
    let alphabet = Alphabet::new(&symbols)?;
    let (a, b) = (0u8, 1u8);
    let rows: Vec<Vec<u8>> = (0..t)
        .map(|i| {
            let marker = 2 + i as u8;
            let mut row = vec![marker];
            row.extend(std::iter::repeat_n(b, l));
            row.push(marker);
            row.extend(std::iter::repeat_n(a, l - 1));
            row.push(if i == 0 { b } else { a });
            row.push(a);
            row
        })
        .collect();
    let instance = Instance::from_ranks(alphabet, rows)?;
    let certified = vec![certify(&instance, vec![b; l], true)?];
    Ok(LabeledInstance {
        instance,
        certified,
        provenance: Provenance::new("claim1", &[("t", t as u64), ("l", l as u64)]),
    })
}

/// Binary family where the short optimum sits away from the long one:
/// `t - 1` copies of `A^(l+k) B^l A` and one `B^(2l+k) A`.
pub fn gen_shrink(t: usize, l: usize, k: usize) -> Result<LabeledInstance> {
    if t < 2 || l < 1 || k < 1 {
        return Err(Error::InvalidParameter(format!(
            "shrink needs t >= 2, l >= 1, k >= 1, got t = {t}, l = {l}, k = {k}"
        )));
    }
    let alphabet = Alphabet::new("AB")?;
    let common: String = "A".repeat(l + k) + &"B".repeat(l) + "A";
    let last: String = "B".repeat(2 * l + k) + "A";
    let mut rows = vec![common; t - 1];
    rows.push(last);
    Ok(LabeledInstance {
        instance: Instance::new(alphabet, &rows)?,
        certified: vec![],
        provenance: Provenance::new(
            "shrink",
            &[("t", t as u64), ("l", l as u64), ("k", k as u64)],
        ),
    })
}

fn plain_alphabet(size: usize) -> Result<Alphabet> {
    if !(2..=PLAIN_SYMBOLS.len()).contains(&size) {
        return Err(Error::InvalidParameter(format!(
            "alphabet size must be in 2..={}, got {size}",
            PLAIN_SYMBOLS.len()
        )));
    }
    Alphabet::new(&PLAIN_SYMBOLS[..size])
}

fn check_dims(t: usize, n: usize) -> Result<()> {
    if t < 1 || n < 1 {
        return Err(Error::InvalidParameter(format!(
            "need t >= 1 and n >= 1, got t = {t}, n = {n}"
        )));
    }
    Ok(())
}

/// Uniform i.i.d. symbols from a seeded ChaCha stream.
pub fn gen_random(t: usize, n: usize, alphabet_size: usize, seed: u64) -> Result<LabeledInstance> {
    check_dims(t, n)?;
    let alphabet = plain_alphabet(alphabet_size)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows = (0..t)
        .map(|_| (0..n).map(|_| rng.gen_range(0..alphabet_size as u8)).collect())
        .collect();
    Ok(LabeledInstance {
        instance: Instance::from_ranks(alphabet, rows)?,
        certified: vec![],
        provenance: Provenance::new(
            "random",
            &[
                ("t", t as u64),
                ("n", n as u64),
                ("sigma", alphabet_size as u64),
                ("seed", seed),
            ],
        ),
    })
}

/// Random background with a random length-`len` motif planted once per
/// sequence, each copy with up to `d` positions resampled.
pub fn gen_planted(
    t: usize,
    n: usize,
    len: usize,
    d: usize,
    alphabet_size: usize,
    seed: u64,
) -> Result<LabeledInstance> {
    check_dims(t, n)?;
    if len < 1 || len > n || d > len {
        return Err(Error::InvalidParameter(format!(
            "planted needs 1 <= L <= n and d <= L, got L = {len}, n = {n}, d = {d}"
        )));
    }
    let alphabet = plain_alphabet(alphabet_size)?;
    let sigma = alphabet_size as u8;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let motif: Vec<u8> = (0..len).map(|_| rng.gen_range(0..sigma)).collect();
    let rows = (0..t)
        .map(|_| {
            let mut row: Vec<u8> = (0..n).map(|_| rng.gen_range(0..sigma)).collect();
            let at = rng.gen_range(0..=n - len);
            let mut copy = motif.clone();
            for pos in rand::seq::index::sample(&mut rng, len, d) {
                copy[pos] = rng.gen_range(0..sigma);
            }
            row[at..at + len].copy_from_slice(&copy);
            row
        })
        .collect();
    let instance = Instance::from_ranks(alphabet, rows)?;
    let certified = vec![certify(&instance, motif, false)?];
    Ok(LabeledInstance {
        instance,
        certified,
        provenance: Provenance::new(
            "planted",
            &[
                ("t", t as u64),
                ("n", n as u64),
                ("L", len as u64),
                ("d", d as u64),
                ("sigma", alphabet_size as u64),
                ("seed", seed),
            ],
        ),
    })
}
