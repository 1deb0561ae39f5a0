//! Benchmark grids: run solvers over instance families, check each result
//! against its bound, and emit one CSV row per run.
//!
//! Besides the rows, a run collects [`Finding`]s: measured values that are
//! compared with published constants rather than enforced.

use std::fmt::Write as _;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{self, OracleKind};
use crate::exec::{Exec, SolverConfig, DEFAULT_BUDGET};
use crate::instances::{gen_claim1, gen_planted, gen_random, gen_shrink, LabeledInstance};
use crate::model::{Pattern, Solution};
use crate::ptas::{self, ratio_bound, RatioForm, SampleMode};
use crate::reopt::{self, advantage_predicate, ReoptInput};

pub const CSV_HEADER: &str = "family,t,n,l,k,r,sigma_form,algo,cost,opt_cost,gap,bound,bound_ok,samples_eval,samples_skipped,ms,threads";

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchConfig {
    #[serde(default)]
    pub budget: Option<u64>,
    #[serde(default)]
    pub grid: Vec<GridSpec>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub family: String,
    #[serde(default = "one")]
    pub t: Vec<usize>,
    #[serde(default = "one")]
    pub l: Vec<usize>,
    #[serde(default = "one")]
    pub k: Vec<usize>,
    /// Sequence length (random and planted families).
    #[serde(default = "ten")]
    pub n: Vec<usize>,
    /// Alphabet size (random and planted families).
    #[serde(default = "two")]
    pub sigma: Vec<usize>,
    /// Mutations per planted copy.
    #[serde(default = "one")]
    pub d: Vec<usize>,
    #[serde(default = "zero")]
    pub seeds: Vec<u64>,
    #[serde(default = "two")]
    pub r: Vec<usize>,
    pub algos: Vec<String>,
    #[serde(default)]
    pub sample_mode: Option<String>,
    #[serde(default)]
    pub ratio_form: Option<String>,
}

fn one() -> Vec<usize> {
    vec![1]
}
fn two() -> Vec<usize> {
    vec![2]
}
fn ten() -> Vec<usize> {
    vec![10]
}
fn zero() -> Vec<u64> {
    vec![0]
}

impl BenchConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| {
            let line = e
                .span()
                .map(|s| text[..s.start.min(text.len())].matches('\n').count() + 1)
                .unwrap_or(0);
            Error::parse(line, e.message().to_string())
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Algo {
    Exact,
    ExactAlign,
    ExactPattern,
    Extend,
    KExtend,
    Ptas,
    Combined,
    ReoptPtas,
}

impl Algo {
    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "exact" => Algo::Exact,
            "exact-align" => Algo::ExactAlign,
            "exact-pattern" => Algo::ExactPattern,
            "extend" => Algo::Extend,
            "k-extend" => Algo::KExtend,
            "ptas" => Algo::Ptas,
            "combined" => Algo::Combined,
            "reopt-ptas" => Algo::ReoptPtas,
            _ => return Err(Error::InvalidParameter(format!("unknown algorithm {s:?}"))),
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Algo::Exact => "exact",
            Algo::ExactAlign => "exact-align",
            Algo::ExactPattern => "exact-pattern",
            Algo::Extend => "extend",
            Algo::KExtend => "k-extend",
            Algo::Ptas => "ptas",
            Algo::Combined => "combined",
            Algo::ReoptPtas => "reopt-ptas",
        }
    }

    fn samples(self) -> bool {
        matches!(self, Algo::Ptas | Algo::Combined | Algo::ReoptPtas)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Bound {
    Exact(u64),
    Additive(u64),
    Ratio(f64),
}

impl Bound {
    fn holds(&self, cost: u64) -> bool {
        match *self {
            Bound::Exact(b) => cost == b,
            Bound::Additive(b) => cost <= b,
            Bound::Ratio(b) => cost as f64 <= b + 1e-9,
        }
    }

    fn render(&self) -> String {
        match self {
            Bound::Exact(b) | Bound::Additive(b) => b.to_string(),
            Bound::Ratio(b) => format!("{b:.6}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunRow {
    pub family: String,
    pub t: usize,
    pub n: usize,
    pub l: usize,
    pub k: usize,
    pub r: Option<usize>,
    pub sigma_form: RatioForm,
    pub algo: Algo,
    pub cost: u64,
    pub opt_cost: Option<u64>,
    pub bound: Option<Bound>,
    pub samples_eval: Option<u64>,
    pub samples_skipped: Option<u64>,
    pub ms: f64,
    pub threads: usize,
}

fn opt_str<T: ToString>(v: Option<T>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

impl RunRow {
    pub fn gap(&self) -> Option<i64> {
        self.opt_cost.map(|o| self.cost as i64 - o as i64)
    }

    /// `None` when there is nothing to check against.
    pub fn bound_ok(&self) -> Option<bool> {
        self.bound.as_ref().map(|b| b.holds(self.cost))
    }

    /// CSV line without the trailing newline.
    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{:.3},{}",
            self.family,
            self.t,
            self.n,
            self.l,
            self.k,
            opt_str(self.r),
            self.sigma_form,
            self.algo.name(),
            self.cost,
            opt_str(self.opt_cost),
            opt_str(self.gap()),
            self.bound.as_ref().map(Bound::render).unwrap_or_default(),
            match self.bound_ok() {
                Some(true) => "true",
                Some(false) => "false",
                None => "na",
            },
            opt_str(self.samples_eval),
            opt_str(self.samples_skipped),
            self.ms,
            self.threads,
        )
    }
}

/// Observations checked against published constants; reported, never
/// enforced.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Finding {
    /// EXTEND's gap to the `(l+1)`-optimum on the extension hard family.
    ClaimTightness {
        t: usize,
        l: usize,
        gap: i64,
        published_gap: i64,
        matches_published: bool,
    },
    /// Optima of the decreasing-length family at both lengths.
    ShrinkOptima {
        t: usize,
        l: usize,
        k: usize,
        short_cost: u64,
        short_pattern: String,
        long_cost: u64,
        long_pattern: String,
        published_long_cost: u64,
        matches_published: bool,
    },
    /// Pruned sampling did worse than full sampling at the same `r`.
    PrunedSamplingCounterexample {
        provenance: String,
        k: usize,
        r: usize,
        pruned_cost: u64,
        full_cost: u64,
    },
    /// Predicted vs observed winner between K-EXTEND and sampling.
    Advantage {
        provenance: String,
        k: usize,
        r: usize,
        sigma: f64,
        opt_cost: u64,
        predicted_extension_wins: bool,
        extension_cost: u64,
        sampling_cost: u64,
    },
}

#[derive(Clone, Debug, Default)]
pub struct BenchReport {
    pub rows: Vec<RunRow>,
    pub findings: Vec<Finding>,
}

impl BenchReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.to_csv());
            out.push('\n');
        }
        out
    }

    pub fn violations(&self) -> usize {
        self.rows.iter().filter(|r| r.bound_ok() == Some(false)).count()
    }

    pub fn findings_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.findings).expect("findings serialize");
        s.push('\n');
        s
    }
}

/// Number of workers `exec` will use.
pub fn worker_count(exec: Exec) -> usize {
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => rayon::current_num_threads(),
        _ => 1,
    }
}

struct Case {
    labeled: LabeledInstance,
    family: String,
    l: usize,
    k: usize,
}

fn build_cases(grid: &GridSpec) -> Result<Vec<Case>> {
    let mut cases = vec![];
    let family = grid.family.as_str();
    for &t in &grid.t {
        for &l in &grid.l {
            for &k in &grid.k {
                let mut push = |labeled: LabeledInstance| {
                    cases.push(Case {
                        labeled,
                        family: family.to_string(),
                        l,
                        k,
                    })
                };
                match family {
                    "claim1" => push(gen_claim1(t, l)?),
                    "shrink" => push(gen_shrink(t, l, k)?),
                    "random" | "planted" => {
                        for &n in &grid.n {
                            for &sigma in &grid.sigma {
                                for &seed in &grid.seeds {
                                    if family == "random" {
                                        push(gen_random(t, n, sigma, seed)?);
                                        continue;
                                    }
                                    for &d in &grid.d {
                                        if l + k <= n && d <= l + k {
                                            push(gen_planted(t, n, l + k, d, sigma, seed)?);
                                        }
                                    }
                                }
                            }
                        }
                    }
                    other => {
                        return Err(Error::InvalidParameter(format!("unknown family {other:?}")))
                    }
                }
            }
        }
    }
    Ok(cases)
}

/// The given length-`l` optimum: certified by the generator or solved.
fn given_optimum(case: &Case, cfg: &SolverConfig) -> Result<Pattern> {
    if let Some(c) = case.labeled.certified_at(case.l).filter(|c| c.optimal) {
        return Ok(c.solution.pattern.clone());
    }
    Ok(exact::solve_cheapest(&case.labeled.instance, case.l, cfg)?.pattern)
}

fn budget_refused<T>(r: Result<T>) -> Result<Option<T>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::BudgetExceeded { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

struct Outcome {
    solution: Solution,
    samples_eval: Option<u64>,
    samples_skipped: Option<u64>,
    ms: f64,
}

fn timed(f: impl FnOnce() -> Result<Outcome>) -> Result<Outcome> {
    let start = Instant::now();
    let mut out = f()?;
    out.ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(out)
}

fn plain(solution: Solution) -> Outcome {
    Outcome {
        solution,
        samples_eval: None,
        samples_skipped: None,
        ms: 0.0,
    }
}

pub fn run(config: &BenchConfig, exec: Exec) -> Result<BenchReport> {
    let cfg = SolverConfig {
        budget: config.budget.unwrap_or(DEFAULT_BUDGET),
        exec,
    };
    let threads = worker_count(exec);
    let mut report = BenchReport::default();

    for grid in &config.grid {
        let algos = grid
            .algos
            .iter()
            .map(|a| Algo::parse(a))
            .collect::<Result<Vec<_>>>()?;
        let mode: SampleMode = grid.sample_mode.as_deref().unwrap_or("distinct").parse()?;
        let form: RatioForm = grid.ratio_form.as_deref().unwrap_or("A").parse()?;

        for case in build_cases(grid)? {
            let inst = &case.labeled.instance;
            let (t, n, l, k) = (inst.t(), inst.n(), case.l, case.k);
            let target = l + k;
            if target > n {
                continue;
            }
            let provenance = case.labeled.provenance.to_string();

            if case.family == "shrink" {
                let short = exact::solve_cheapest(inst, l, &cfg)?;
                let long = exact::solve_cheapest(inst, target, &cfg)?;
                let published = target as u64;
                report.findings.push(Finding::ShrinkOptima {
                    t,
                    l,
                    k,
                    short_cost: short.cost,
                    short_pattern: short.pattern.text(inst.alphabet()),
                    long_cost: long.cost,
                    long_pattern: long.pattern.text(inst.alphabet()),
                    published_long_cost: published,
                    matches_published: long.cost == published,
                });
            }

            let opt = budget_refused(exact::solve_cheapest(inst, target, &cfg))?.map(|s| s.cost);
            let given = given_optimum(&case, &cfg)?;
            let input = ReoptInput::new(inst, given, k)?.certified(true);
            let mut full_sampling: Vec<(usize, u64)> = vec![];

            for &algo in &algos {
                if algo == Algo::Extend && k != 1 {
                    continue;
                }
                let rs: Vec<Option<usize>> = if algo.samples() {
                    grid.r
                        .iter()
                        .copied()
                        .filter(|&r| mode == SampleMode::Multiset || r <= t)
                        .map(Some)
                        .collect()
                } else {
                    vec![None]
                };
                for r in rs {
                    let sigma = r.map(|r| ratio_bound(inst.alphabet().size(), r, form)).transpose()?;
                    let outcome = timed(|| {
                        Ok(match algo {
                            Algo::Exact => plain(exact::solve_cheapest(inst, target, &cfg)?),
                            Algo::ExactAlign => plain(exact::solve(OracleKind::Alignment, inst, target, &cfg)?),
                            Algo::ExactPattern => plain(exact::solve(OracleKind::Pattern, inst, target, &cfg)?),
                            Algo::Extend => plain(reopt::extend(&input, &cfg)?),
                            Algo::KExtend => plain(reopt::k_extend(&input, &cfg)?),
                            Algo::Ptas => {
                                let run = ptas::ptas(inst, target, r.unwrap(), mode, &cfg)?;
                                Outcome {
                                    solution: run.solution,
                                    samples_eval: Some(run.evaluated),
                                    samples_skipped: Some(0),
                                    ms: 0.0,
                                }
                            }
                            Algo::Combined => plain(reopt::combined(&input, r.unwrap(), mode, &cfg)?),
                            Algo::ReoptPtas => {
                                let run = ptas::reopt_ptas(&input, r.unwrap(), mode, &cfg)?;
                                Outcome {
                                    solution: run.solution,
                                    samples_eval: Some(run.evaluated),
                                    samples_skipped: Some(run.skipped),
                                    ms: 0.0,
                                }
                            }
                        })
                    })?;
                    debug_assert!(outcome.solution.verify(inst).is_ok());
                    let cost = outcome.solution.cost;

                    let bound = opt.map(|o| match algo {
                        Algo::Exact | Algo::ExactAlign | Algo::ExactPattern => Bound::Exact(o),
                        Algo::Extend => Bound::Additive(o + t as u64),
                        Algo::KExtend | Algo::ReoptPtas => Bound::Additive(o + (k * t) as u64),
                        Algo::Ptas => Bound::Ratio(sigma.unwrap() * o as f64),
                        Algo::Combined => {
                            let additive = (o + (k * t) as u64) as f64;
                            Bound::Ratio(additive.min(sigma.unwrap() * o as f64))
                        }
                    });

                    match algo {
                        Algo::Extend if case.family == "claim1" => {
                            if let Some(o) = opt {
                                let gap = cost as i64 - o as i64;
                                let published = t as i64 - 1;
                                report.findings.push(Finding::ClaimTightness {
                                    t,
                                    l,
                                    gap,
                                    published_gap: published,
                                    matches_published: gap == published,
                                });
                            }
                        }
                        Algo::Ptas => full_sampling.push((r.unwrap(), cost)),
                        Algo::ReoptPtas => {
                            let r = r.unwrap();
                            let full = match full_sampling.iter().find(|(fr, _)| *fr == r) {
                                Some(&(_, c)) => c,
                                None => ptas::ptas(inst, target, r, mode, &cfg)?.solution.cost,
                            };
                            if cost > full {
                                report.findings.push(Finding::PrunedSamplingCounterexample {
                                    provenance: provenance.clone(),
                                    k,
                                    r,
                                    pruned_cost: cost,
                                    full_cost: full,
                                });
                            }
                        }
                        Algo::Combined => {
                            if let Some(o) = opt {
                                let r = r.unwrap();
                                let extension_cost = reopt::k_extend(&input, &cfg)?.cost;
                                let sampling_cost = ptas::ptas(inst, target, r, mode, &cfg)?.solution.cost;
                                let sigma = sigma.unwrap();
                                report.findings.push(Finding::Advantage {
                                    provenance: provenance.clone(),
                                    k,
                                    r,
                                    sigma,
                                    opt_cost: o,
                                    predicted_extension_wins: advantage_predicate(t, sigma, o),
                                    extension_cost,
                                    sampling_cost,
                                });
                            }
                        }
                        _ => {}
                    }

                    report.rows.push(RunRow {
                        family: case.family.clone(),
                        t,
                        n,
                        l,
                        k,
                        r,
                        sigma_form: form,
                        algo,
                        cost,
                        opt_cost: opt,
                        bound,
                        samples_eval: outcome.samples_eval,
                        samples_skipped: outcome.samples_skipped,
                        ms: outcome.ms,
                        threads,
                    });
                }
            }
        }
    }
    Ok(report)
}

/// Drops the run-environment columns (`ms`, `threads`) from a CSV line.
pub fn strip_timing(line: &str) -> String {
    let mut fields: Vec<&str> = line.split(',').collect();
    fields.truncate(fields.len().saturating_sub(2));
    let mut out = String::new();
    for (i, f) in fields.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        let _ = write!(out, "{f}");
    }
    out
}
