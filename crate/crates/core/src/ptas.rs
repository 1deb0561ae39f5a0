//! Sampling approximation and its reoptimization-pruned variant.
//!
//! An r-sample is r windows of the target length; its column consensus is a
//! candidate pattern, priced against the whole instance. The pruned variant
//! starts from K-EXTEND and skips every sample whose members all lie in the
//! flanking windows K-EXTEND already explored.

use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use crate::cost::{cost_within, evaluate, Consensus};
use crate::error::{Error, Result};
use crate::exec::{check_budget, fold_chunks, SolverConfig};
use crate::model::{Instance, Occurrence, Pattern, Solution};
use crate::reopt::{best_of, k_extend, ReoptInput};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum SampleMode {
    /// At most one member per sequence.
    #[default]
    Distinct,
    /// Any multiset of windows, repeats allowed.
    Multiset,
}

impl SampleMode {
    pub fn name(self) -> &'static str {
        match self {
            SampleMode::Distinct => "distinct",
            SampleMode::Multiset => "multiset",
        }
    }
}

impl fmt::Display for SampleMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SampleMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "distinct" | "distinct-sequences" => Ok(SampleMode::Distinct),
            "multiset" => Ok(SampleMode::Multiset),
            _ => Err(Error::InvalidParameter(format!("unknown sample mode {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SampleSpec {
    pub r: usize,
    pub len: usize,
    pub mode: SampleMode,
}

impl SampleSpec {
    pub fn new(r: usize, len: usize, mode: SampleMode) -> Self {
        SampleSpec { r, len, mode }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sample {
    pub members: Vec<Occurrence>,
}

/// Per-sequence half-open intervals of window starts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WindowSet {
    len: usize,
    starts: Vec<Range<usize>>,
}

impl WindowSet {
    /// Windows of length `l + k` that fit inside `[s - k, s + l + k)` for
    /// each occurrence start `s`, clipped to the sequence.
    pub fn flanking(occurrence_starts: &[usize], l: usize, k: usize, n: usize) -> Result<Self> {
        let len = l + k;
        if l == 0 || len > n {
            return Err(Error::BadLength { len, n });
        }
        let last = n - len;
        let starts = occurrence_starts
            .iter()
            .map(|&s| {
                if s + l > n {
                    return Err(Error::InvalidParameter(format!(
                        "occurrence start {s} does not fit length {l} in {n}"
                    )));
                }
                let lo = s.saturating_sub(k);
                let hi = s.min(last);
                Ok(if lo <= hi { lo..hi + 1 } else { lo..lo })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(WindowSet { len, starts })
    }

    pub fn window_len(&self) -> usize {
        self.len
    }

    pub fn ranges(&self) -> &[Range<usize>] {
        &self.starts
    }

    pub fn contains(&self, seq: usize, start: usize) -> bool {
        self.starts.get(seq).is_some_and(|r| r.contains(&start))
    }

    /// Whether every member of a sample lies inside its sequence's interval.
    pub fn covers(&self, members: &[Occurrence]) -> bool {
        members.iter().all(|o| self.contains(o.seq_index, o.start))
    }
}

/// The windows K-EXTEND draws from, one interval per sequence.
pub fn flanking_windows(input: &ReoptInput<'_>) -> WindowSet {
    let starts: Vec<Range<usize>> = (0..input.instance().t())
        .map(|i| {
            let s = input.occurrences()[i].start;
            let (lo, hi) = input.extension_range(i);
            s - hi..s - lo + 1
        })
        .collect();
    WindowSet {
        len: input.target_len(),
        starts,
    }
}

/// Which printed variant of the sampling ratio to use.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum RatioForm {
    /// `1 + (4|Σ| - 4) / (√e·√(4r+1) - 3)`
    #[default]
    A,
    /// `1 + (4|Σ| - 4) / (√e·(√(4r+1) - 3))`
    B,
}

impl fmt::Display for RatioForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RatioForm::A => "A",
            RatioForm::B => "B",
        })
    }
}

impl FromStr for RatioForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" | "a" => Ok(RatioForm::A),
            "B" | "b" => Ok(RatioForm::B),
            _ => Err(Error::InvalidParameter(format!("unknown ratio form {s:?}"))),
        }
    }
}

/// Approximation ratio guaranteed by r-sampling over an alphabet of the
/// given size.
pub fn ratio_bound(alphabet_size: usize, r: usize, form: RatioForm) -> Result<f64> {
    let numerator = 4.0 * alphabet_size as f64 - 4.0;
    if numerator == 0.0 {
        return Ok(1.0);
    }
    let e_sqrt = std::f64::consts::E.sqrt();
    let root = (4.0 * r as f64 + 1.0).sqrt();
    let (denominator, min_r) = match form {
        RatioForm::A => (e_sqrt * root - 3.0, 1),
        RatioForm::B => (e_sqrt * (root - 3.0), 3),
    };
    if r < min_r || denominator <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "ratio form {form} needs r >= {min_r}, got r = {r}"
        )));
    }
    Ok(1.0 + numerator / denominator)
}

fn binomial(n: u128, k: u128) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc = 1u128;
    for i in 0..k {
        acc = acc.checked_mul(n - i)? / (i + 1);
    }
    Some(acc)
}

/// Number of samples `spec` describes on `instance`.
pub fn sample_count(instance: &Instance, spec: &SampleSpec) -> Option<u128> {
    let t = instance.t() as u128;
    let w = instance.windows_per_row(spec.len) as u128;
    let r = spec.r as u128;
    match spec.mode {
        SampleMode::Distinct => binomial(t, r)?.checked_mul(w.checked_pow(spec.r as u32)?),
        SampleMode::Multiset => binomial((t * w + r).checked_sub(1)?, r),
    }
}

/// Shape of the sample space. Members are addressed by flat position
/// `seq * w + start`; samples are non-decreasing (multiset) or
/// sequence-increasing (distinct) tuples of flat positions, visited in
/// lexicographic order.
#[derive(Clone, Copy, Debug)]
struct Geometry {
    t: usize,
    w: usize,
    r: usize,
    len: usize,
    mode: SampleMode,
}

impl Geometry {
    fn new(instance: &Instance, spec: &SampleSpec) -> Result<Self> {
        instance.check_length(spec.len)?;
        if spec.r == 0 {
            return Err(Error::InvalidParameter("sample size r must be positive".into()));
        }
        if spec.mode == SampleMode::Distinct && spec.r > instance.t() {
            return Err(Error::InvalidParameter(format!(
                "r = {} exceeds t = {} for distinct-sequence samples",
                spec.r,
                instance.t()
            )));
        }
        Ok(Geometry {
            t: instance.t(),
            w: instance.windows_per_row(spec.len),
            r: spec.r,
            len: spec.len,
            mode: spec.mode,
        })
    }

    fn min_after(&self, prev: usize) -> usize {
        match self.mode {
            SampleMode::Distinct => (prev / self.w + 1) * self.w,
            SampleMode::Multiset => prev,
        }
    }

    fn max_at(&self, j: usize) -> usize {
        match self.mode {
            SampleMode::Distinct => (self.t - self.r + j + 1) * self.w - 1,
            SampleMode::Multiset => self.t * self.w - 1,
        }
    }

    /// Number of admissible first positions.
    fn first_positions(&self) -> usize {
        self.max_at(0) + 1
    }

    fn occurrence(&self, flat: usize) -> Occurrence {
        Occurrence::new(flat / self.w, flat % self.w, self.len)
    }
}

/// Walks the samples whose first member lies in a range of flat positions.
#[derive(Clone, Debug)]
struct Cursor {
    geom: Geometry,
    first_max: usize,
    pos: Vec<usize>,
}

impl Cursor {
    fn new(geom: Geometry, first: Range<usize>) -> Option<Self> {
        let first_max = first.end.min(geom.first_positions()).checked_sub(1)?;
        if first.start > first_max {
            return None;
        }
        let mut pos = Vec::with_capacity(geom.r);
        pos.push(first.start);
        for _ in 1..geom.r {
            pos.push(geom.min_after(*pos.last().unwrap()));
        }
        Some(Cursor {
            geom,
            first_max,
            pos,
        })
    }

    fn advance(&mut self) -> bool {
        for j in (0..self.geom.r).rev() {
            let bound = if j == 0 { self.first_max } else { self.geom.max_at(j) };
            if self.pos[j] < bound {
                self.pos[j] += 1;
                for m in j + 1..self.geom.r {
                    self.pos[m] = self.geom.min_after(self.pos[m - 1]);
                }
                return true;
            }
        }
        false
    }

    fn inside(&self, windows: &WindowSet) -> bool {
        let w = self.geom.w;
        self.pos.iter().all(|&f| windows.contains(f / w, f % w))
    }
}

/// Iterator over every sample of a spec, optionally omitting those wholly
/// inside a window set.
pub struct Samples<'a> {
    geom: Geometry,
    cursor: Option<Cursor>,
    exclude: Option<&'a WindowSet>,
}

impl Iterator for Samples<'_> {
    type Item = Sample;

    fn next(&mut self) -> Option<Sample> {
        loop {
            let cursor = self.cursor.as_mut()?;
            let keep = !self.exclude.is_some_and(|ws| cursor.inside(ws));
            let sample = keep.then(|| Sample {
                members: cursor.pos.iter().map(|&f| self.geom.occurrence(f)).collect(),
            });
            if !cursor.advance() {
                self.cursor = None;
            }
            if sample.is_some() {
                return sample;
            }
        }
    }
}

pub fn enumerate_samples<'a>(
    instance: &Instance,
    spec: &SampleSpec,
    exclude: Option<&'a WindowSet>,
) -> Result<Samples<'a>> {
    let geom = Geometry::new(instance, spec)?;
    check_window_len(exclude, spec.len)?;
    Ok(Samples {
        geom,
        cursor: Cursor::new(geom, 0..usize::MAX),
        exclude,
    })
}

fn check_window_len(exclude: Option<&WindowSet>, len: usize) -> Result<()> {
    match exclude {
        Some(ws) if ws.len != len => Err(Error::InvalidParameter(format!(
            "window set is for length {}, samples are length {len}",
            ws.len
        ))),
        _ => Ok(()),
    }
}

/// Consensus of the sample's windows, priced against the whole instance.
pub fn k_best_align(sample: &Sample, instance: &Instance) -> Result<Solution> {
    let len = sample
        .members
        .first()
        .ok_or(Error::Empty("sample has no members"))?
        .length;
    instance.check_length(len)?;
    let mut rows = Vec::with_capacity(sample.members.len());
    for o in &sample.members {
        if o.length != len || o.seq_index >= instance.t() || o.start + len > instance.n() {
            return Err(Error::InvalidParameter(format!("bad sample member {o:?}")));
        }
        rows.push(instance.window(o.seq_index, o.start, len));
    }
    let mut pattern = Vec::with_capacity(len);
    Consensus::new(instance.alphabet().size()).compute(rows.iter().copied(), len, &mut pattern);
    evaluate(&Pattern::from_ranks_unchecked(pattern), instance)
}

/// A sampled search result with its sample accounting.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampledSolution {
    /// `None` when every sample was excluded.
    pub best: Option<Solution>,
    pub evaluated: u64,
    pub skipped: u64,
}

#[derive(Default)]
struct Scan {
    best: Option<(u64, Vec<u8>)>,
    evaluated: u64,
    skipped: u64,
}

impl Scan {
    fn merge(self, other: Scan) -> Scan {
        Scan {
            best: crate::exec::min_opt(self.best, other.best),
            evaluated: self.evaluated + other.evaluated,
            skipped: self.skipped + other.skipped,
        }
    }
}

/// Minimum over every non-excluded sample of its consensus cost.
pub fn sampled_search(
    instance: &Instance,
    spec: &SampleSpec,
    exclude: Option<&WindowSet>,
    cfg: &SolverConfig,
) -> Result<SampledSolution> {
    let geom = Geometry::new(instance, spec)?;
    check_window_len(exclude, spec.len)?;
    check_budget("sampling", sample_count(instance, spec), cfg.budget)?;
    let sigma = instance.alphabet().size();
    let len = spec.len;

    let scan = fold_chunks(
        cfg.exec,
        geom.first_positions() as u64,
        |range| {
            let mut scan = Scan::default();
            let Some(mut cursor) = Cursor::new(geom, range.start as usize..range.end as usize) else {
                return scan;
            };
            let mut consensus = Consensus::new(sigma);
            let mut pattern = Vec::with_capacity(len);
            loop {
                if exclude.is_some_and(|ws| cursor.inside(ws)) {
                    scan.skipped += 1;
                } else {
                    scan.evaluated += 1;
                    let rows = cursor
                        .pos
                        .iter()
                        .map(|&f| instance.window(f / geom.w, f % geom.w, len));
                    consensus.compute(rows, len, &mut pattern);
                    let limit = scan.best.as_ref().map_or(u64::MAX, |b| b.0);
                    if let Some(cost) = cost_within(&pattern, instance, limit) {
                        let better = match &scan.best {
                            None => true,
                            Some(b) => (cost, &pattern[..]) < (b.0, &b.1[..]),
                        };
                        if better {
                            scan.best = Some((cost, pattern.clone()));
                        }
                    }
                }
                if !cursor.advance() {
                    break;
                }
            }
            scan
        },
        Scan::merge,
    )
    .unwrap_or_default();

    let best = scan
        .best
        .map(|(_, p)| evaluate(&Pattern::from_ranks_unchecked(p), instance))
        .transpose()?;
    Ok(SampledSolution {
        best,
        evaluated: scan.evaluated,
        skipped: scan.skipped,
    })
}

/// Result of a full (unpruned) sampling run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PtasRun {
    pub solution: Solution,
    pub evaluated: u64,
}

/// Best consensus over every r-sample of length-`len` windows.
pub fn ptas(instance: &Instance, len: usize, r: usize, mode: SampleMode, cfg: &SolverConfig) -> Result<PtasRun> {
    let run = sampled_search(instance, &SampleSpec::new(r, len, mode), None, cfg)?;
    Ok(PtasRun {
        solution: run.best.expect("unpruned sample space is non-empty"),
        evaluated: run.evaluated,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReoptPtasRun {
    pub solution: Solution,
    /// K-EXTEND's result.
    pub extended: Solution,
    /// Best sample outside the flanking windows, if any was left.
    pub sampled: Option<Solution>,
    pub evaluated: u64,
    pub skipped: u64,
}

/// K-EXTEND followed by sampling over the samples it did not cover.
pub fn reopt_ptas(input: &ReoptInput<'_>, r: usize, mode: SampleMode, cfg: &SolverConfig) -> Result<ReoptPtasRun> {
    let extended = k_extend(input, cfg)?;
    let windows = flanking_windows(input);
    let spec = SampleSpec::new(r, input.target_len(), mode);
    let run = sampled_search(input.instance(), &spec, Some(&windows), cfg)?;
    let solution = best_of(std::iter::once(extended.clone()).chain(run.best.clone()))?;
    Ok(ReoptPtasRun {
        solution,
        extended,
        sampled: run.best,
        evaluated: run.evaluated,
        skipped: run.skipped,
    })
}
