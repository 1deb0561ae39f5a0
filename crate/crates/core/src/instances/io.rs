//! Text formats.
//!
//! Instance files:
//!
//! ```text
//! #csr v1 t=<t> n=<n> sigma=<symbols>
//! <sequence 1>
//! ...
//! <sequence t>
//! ```
//!
//! with LF line endings and no trailing whitespace. Solution files are one
//! JSON document with the fields of [`SolutionDoc`] in declaration order.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Alphabet, Instance, Occurrence, Pattern, Solution};

const MAGIC: &str = "#csr v1";

pub fn format_instance(instance: &Instance) -> String {
    let mut out = format!(
        "{MAGIC} t={} n={} sigma={}\n",
        instance.t(),
        instance.n(),
        instance.alphabet().symbols()
    );
    for i in 0..instance.t() {
        out.push_str(&instance.sequence_text(i));
        out.push('\n');
    }
    out
}

fn header_field<'a>(token: Option<&'a str>, key: &str) -> Result<&'a str> {
    token
        .and_then(|tok| tok.strip_prefix(key)?.strip_prefix('='))
        .ok_or_else(|| Error::parse(1, format!("expected `{key}=` in header")))
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    let mut lines = text.split('\n');
    let header = lines.next().unwrap_or_default();
    if header.contains('\r') {
        return Err(Error::parse(1, "CR line endings are not allowed"));
    }
    let rest = header
        .strip_prefix(MAGIC)
        .and_then(|r| r.strip_prefix(' '))
        .ok_or_else(|| Error::parse(1, format!("header must start with `{MAGIC} `")))?;
    let mut tokens = rest.split(' ');
    let t: usize = header_field(tokens.next(), "t")?
        .parse()
        .map_err(|_| Error::parse(1, "t is not a number"))?;
    let n: usize = header_field(tokens.next(), "n")?
        .parse()
        .map_err(|_| Error::parse(1, "n is not a number"))?;
    let symbols = header_field(tokens.next(), "sigma")?;
    if tokens.next().is_some() {
        return Err(Error::parse(1, "trailing fields in header"));
    }
    if t == 0 || n == 0 {
        return Err(Error::parse(1, "t and n must be positive"));
    }
    let alphabet = Alphabet::new(symbols).map_err(|e| Error::parse(1, e.to_string()))?;

    let mut rows = Vec::with_capacity(t);
    for i in 0..t {
        let line_no = i + 2;
        let line = lines
            .next()
            .ok_or_else(|| Error::parse(line_no, format!("expected {t} sequences, found {i}")))?;
        if line.len() != n {
            return Err(Error::parse(
                line_no,
                format!("sequence has length {}, header says n = {n}", line.len()),
            ));
        }
        let row = alphabet
            .encode(line)
            .map_err(|e| Error::parse(line_no, e.to_string()))?;
        rows.push(row);
    }
    for (j, extra) in lines.enumerate() {
        // a single final LF leaves one empty tail
        if !extra.is_empty() {
            return Err(Error::parse(t + 2 + j, "unexpected content after last sequence"));
        }
    }
    if !text.ends_with('\n') {
        return Err(Error::parse(t + 1, "missing final line feed"));
    }
    Instance::from_ranks(alphabet, rows)
}

pub fn read_instance(path: impl AsRef<Path>) -> Result<Instance> {
    parse_instance(&fs::read_to_string(path)?)
}

pub fn write_instance(instance: &Instance, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, format_instance(instance))?;
    Ok(())
}

/// On-disk form of a [`Solution`] plus how it was produced.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionDoc {
    pub pattern: String,
    pub cost: u64,
    /// `(sequence index, start)` pairs.
    pub occurrences: Vec<(usize, usize)>,
    pub algorithm: String,
    pub params: BTreeMap<String, String>,
    pub provenance: String,
}

impl SolutionDoc {
    pub fn new(
        solution: &Solution,
        instance: &Instance,
        algorithm: impl Into<String>,
        params: BTreeMap<String, String>,
        provenance: impl Into<String>,
    ) -> Self {
        SolutionDoc {
            pattern: solution.pattern.text(instance.alphabet()),
            cost: solution.cost,
            occurrences: solution
                .occurrences
                .iter()
                .map(|o| (o.seq_index, o.start))
                .collect(),
            algorithm: algorithm.into(),
            params,
            provenance: provenance.into(),
        }
    }

    /// Rebuilds the solution and checks its stored cost.
    pub fn to_solution(&self, instance: &Instance) -> Result<Solution> {
        let pattern = Pattern::from_text(instance.alphabet(), &self.pattern)?;
        let occurrences = self
            .occurrences
            .iter()
            .map(|&(seq, start)| Occurrence::new(seq, start, pattern.len()))
            .collect();
        let solution = Solution {
            pattern,
            occurrences,
            cost: self.cost,
        };
        solution.verify(instance)?;
        Ok(solution)
    }
}

pub fn format_solution(doc: &SolutionDoc) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("solution documents always serialize");
    s.push('\n');
    s
}

pub fn parse_solution(text: &str, instance: &Instance) -> Result<(SolutionDoc, Solution)> {
    let doc: SolutionDoc =
        serde_json::from_str(text).map_err(|e| Error::parse(e.line(), e.to_string()))?;
    let solution = doc.to_solution(instance)?;
    Ok((doc, solution))
}

pub fn read_solution(path: impl AsRef<Path>, instance: &Instance) -> Result<(SolutionDoc, Solution)> {
    parse_solution(&fs::read_to_string(path)?, instance)
}

pub fn write_solution(doc: &SolutionDoc, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, format_solution(doc))?;
    Ok(())
}
