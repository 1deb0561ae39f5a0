//! `csr`: generate instances, run solvers and reoptimization pipelines, and
//! produce benchmark reports.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use csr_core::bench::{self, BenchConfig};
use csr_core::exact::{self, OracleKind};
use csr_core::exec::DEFAULT_BUDGET;
use csr_core::instances::{
    format_instance, format_solution, gen_claim1, gen_planted, gen_random, gen_shrink, parse_solution,
    read_instance, LabeledInstance, SolutionDoc,
};
use csr_core::ptas::{self, ratio_bound, RatioForm, SampleMode};
use csr_core::reopt::{self, ReoptInput};
use csr_core::{Error, Exec, Instance, Pattern, Solution, SolverConfig};

mod record;

use record::RunRecord;

const EXIT_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_PARSE: u8 = 3;
const EXIT_BUDGET: u8 = 4;
const EXIT_BOUND: u8 = 5;

#[derive(Parser)]
#[command(name = "csr", version, about = "Closest substring solvers and reoptimization")]
struct Cli {
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true, env = "CSR_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an instance file.
    Gen(GenArgs),
    /// Solve an instance at one pattern length.
    Solve(SolveArgs),
    /// Grow a given length-l solution to length l + k.
    Reopt(ReoptArgs),
    /// Run a benchmark grid and write a CSV report.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Claim1,
    Shrink,
    Random,
    Planted,
}

#[derive(Args)]
struct GenArgs {
    #[arg(value_enum)]
    family: Family,
    #[arg(long)]
    t: usize,
    #[arg(long)]
    l: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    /// Alphabet size (random, planted).
    #[arg(long, default_value_t = 4)]
    sigma: usize,
    /// Planted motif length.
    #[arg(long = "length", short = 'L')]
    length: Option<usize>,
    /// Mutations per planted copy.
    #[arg(long, default_value_t = 0)]
    d: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SamplingArgs {
    #[arg(long)]
    r: Option<usize>,
    #[arg(long = "sample-mode", default_value = "distinct")]
    sample_mode: String,
    #[arg(long = "ratio-form", default_value = "A")]
    ratio_form: String,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
}

#[derive(Args)]
struct SolveArgs {
    instance: PathBuf,
    #[arg(long = "length", short = 'L')]
    length: usize,
    /// exact-align | exact-pattern | ptas
    #[arg(long)]
    algo: String,
    #[command(flatten)]
    sampling: SamplingArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReoptArgs {
    instance: PathBuf,
    /// Solution document or plain-text pattern of the given optimum.
    #[arg(long)]
    vopt: PathBuf,
    #[arg(long)]
    k: usize,
    /// extend | k-extend | combined | reopt-ptas
    #[arg(long)]
    algo: String,
    #[command(flatten)]
    sampling: SamplingArgs,
    /// Also run the exact oracle at length l + k to fill in bounds.
    #[arg(long)]
    with_oracle: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// TOML grid configuration.
    config: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Parse { .. } | Error::CostMismatch { .. } | Error::UnknownSymbol(_) | Error::Ragged { .. } => {
                EXIT_PARSE
            }
            Error::BudgetExceeded { .. } => EXIT_BUDGET,
            Error::InvalidParameter(_) | Error::BadLength { .. } | Error::InvalidAlphabet(_) => EXIT_USAGE,
            _ => EXIT_FAILURE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type CliResult<T> = Result<T, Failure>;

fn write_output(path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::from(Error::from(e))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_instance(path: &Path) -> CliResult<Instance> {
    read_instance(path).map_err(|e| match e {
        Error::Io(io) => Failure {
            code: EXIT_FAILURE,
            message: format!("{}: {io}", path.display()),
        },
        other => Failure {
            code: EXIT_PARSE,
            message: format!("{}: {other}", path.display()),
        },
    })
}

fn cmd_gen(args: &GenArgs) -> CliResult<()> {
    let need = |v: Option<usize>, name: &str| v.ok_or_else(|| Failure::usage(format!("--{name} is required")));
    let labeled: LabeledInstance = match args.family {
        Family::Claim1 => gen_claim1(args.t, need(args.l, "l")?)?,
        Family::Shrink => gen_shrink(args.t, need(args.l, "l")?, need(args.k, "k")?)?,
        Family::Random => gen_random(args.t, need(args.n, "n")?, args.sigma, args.seed)?,
        Family::Planted => gen_planted(
            args.t,
            need(args.n, "n")?,
            need(args.length, "length")?,
            args.d,
            args.sigma,
            args.seed,
        )?,
    };
    let inst = &labeled.instance;
    write_output(args.out.as_deref(), &format_instance(inst))?;
    if let Some(out) = &args.out {
        for cert in &labeled.certified {
            let mut params = BTreeMap::new();
            params.insert("optimal".to_string(), cert.optimal.to_string());
            let doc = SolutionDoc::new(&cert.solution, inst, "certified", params, labeled.provenance.to_string());
            let path = PathBuf::from(format!("{}.L{}.sol.json", out.display(), cert.len));
            write_output(Some(&path), &format_solution(&doc))?;
        }
    }
    Ok(())
}

struct Sampling {
    r: Option<usize>,
    mode: SampleMode,
    form: RatioForm,
    cfg: SolverConfig,
}

fn sampling(args: &SamplingArgs, exec: Exec) -> CliResult<Sampling> {
    Ok(Sampling {
        r: args.r,
        mode: args.sample_mode.parse().map_err(|e: Error| Failure::usage(e.to_string()))?,
        form: args.ratio_form.parse().map_err(|e: Error| Failure::usage(e.to_string()))?,
        cfg: SolverConfig {
            budget: args.budget,
            exec,
        },
    })
}

impl Sampling {
    fn r(&self) -> CliResult<usize> {
        self.r.ok_or_else(|| Failure::usage("--r is required for sampling algorithms"))
    }

    fn params(&self, extra: &[(&str, String)]) -> BTreeMap<String, String> {
        let mut p: BTreeMap<String, String> = extra.iter().map(|(k, v)| (k.to_string(), v.clone())).collect();
        if let Some(r) = self.r {
            p.insert("r".into(), r.to_string());
            p.insert("sample_mode".into(), self.mode.to_string());
            p.insert("ratio_form".into(), self.form.to_string());
        }
        p
    }
}

fn finish(
    inst: &Instance,
    solution: &Solution,
    algo: &str,
    params: BTreeMap<String, String>,
    provenance: String,
    record: RunRecord,
    out: Option<&Path>,
) -> CliResult<()> {
    let doc = SolutionDoc::new(solution, inst, algo, params, provenance);
    let text = format_solution(&doc);
    // re-verify what is about to be written
    parse_solution(&text, inst)?;
    match out {
        Some(path) => {
            write_output(Some(path), &text)?;
            let rec_path = PathBuf::from(format!("{}.run.json", path.display()));
            write_output(Some(&rec_path), &record.to_json())?;
            println!("{}", record.to_json().trim_end());
        }
        None => {
            print!("{text}");
            eprintln!("{}", record.to_json().trim_end());
        }
    }
    Ok(())
}

fn cmd_solve(args: &SolveArgs, exec: Exec, threads: usize) -> CliResult<()> {
    let inst = load_instance(&args.instance)?;
    let s = sampling(&args.sampling, exec)?;
    let start = Instant::now();
    let mut record = RunRecord::new(&args.instance, &args.algo, threads);
    let solution = match args.algo.as_str() {
        "exact-align" | "exact-pattern" => {
            let kind: OracleKind = args.algo.parse()?;
            let sol = exact::solve(kind, &inst, args.length, &s.cfg)?;
            record.oracle_cost = Some(sol.cost);
            sol
        }
        "ptas" => {
            let r = s.r()?;
            let run = ptas::ptas(&inst, args.length, r, s.mode, &s.cfg)?;
            let sigma = ratio_bound(inst.alphabet().size(), r, s.form)?;
            record.ratio_bound = Some(sigma);
            record.samples_evaluated = Some(run.evaluated);
            record.samples_skipped = Some(0);
            run.solution
        }
        other => return Err(Failure::usage(format!("unknown solve algorithm {other:?}"))),
    };
    record.finish(&inst, &solution, start.elapsed());
    let params = s.params(&[("L", args.length.to_string())]);
    finish(&inst, &solution, &args.algo, params, args.instance.display().to_string(), record, args.out.as_deref())
}

fn load_given(path: &Path, inst: &Instance) -> CliResult<(Pattern, Option<Vec<csr_core::Occurrence>>, bool)> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::from(Error::from(e)))?;
    if text.trim_start().starts_with('{') {
        let (doc, sol) = parse_solution(&text, inst)?;
        let certified = doc.algorithm.starts_with("exact")
            || (doc.algorithm == "certified" && doc.params.get("optimal").map(String::as_str) == Some("true"));
        Ok((sol.pattern, Some(sol.occurrences), certified))
    } else {
        let pattern = Pattern::from_text(inst.alphabet(), text.trim())
            .map_err(|e| Failure { code: EXIT_PARSE, message: format!("{}: {e}", path.display()) })?;
        Ok((pattern, None, false))
    }
}

fn cmd_reopt(args: &ReoptArgs, exec: Exec, threads: usize) -> CliResult<()> {
    let inst = load_instance(&args.instance)?;
    let s = sampling(&args.sampling, exec)?;
    let (given, occurrences, certified) = load_given(&args.vopt, &inst)?;
    let l = given.len();
    if args.k == 0 || l + args.k > inst.n() {
        return Err(Failure::usage(format!(
            "need 1 <= k and l + k <= n (l = {l}, k = {}, n = {})",
            args.k,
            inst.n()
        )));
    }
    let input = match occurrences {
        Some(occ) => ReoptInput::with_occurrences(&inst, given, occ, args.k)?,
        None => ReoptInput::new(&inst, given, args.k)?,
    }
    .certified(certified);
    let target = input.target_len();
    let t = inst.t() as u64;
    let k = args.k as u64;

    let start = Instant::now();
    let mut record = RunRecord::new(&args.instance, &args.algo, threads);
    record.given_certified = Some(certified);
    let mut additive = k * t;
    let solution = match args.algo.as_str() {
        "extend" => {
            if args.k != 1 {
                return Err(Failure::usage("extend requires --k 1"));
            }
            additive = t;
            reopt::extend(&input, &s.cfg)?
        }
        "k-extend" => reopt::k_extend(&input, &s.cfg)?,
        "combined" => {
            let r = s.r()?;
            record.ratio_bound = Some(ratio_bound(inst.alphabet().size(), r, s.form)?);
            reopt::combined(&input, r, s.mode, &s.cfg)?
        }
        "reopt-ptas" => {
            let r = s.r()?;
            record.ratio_bound = Some(ratio_bound(inst.alphabet().size(), r, s.form)?);
            let run = ptas::reopt_ptas(&input, r, s.mode, &s.cfg)?;
            record.samples_evaluated = Some(run.evaluated);
            record.samples_skipped = Some(run.skipped);
            run.solution
        }
        other => return Err(Failure::usage(format!("unknown reopt algorithm {other:?}"))),
    };
    record.finish(&inst, &solution, start.elapsed());
    record.given_cost = Some(reopt::given_cost(&input)?);
    record.additive_bound_given = record.given_cost.map(|g| g + additive);
    if args.with_oracle {
        let opt = exact::solve_cheapest(&inst, target, &s.cfg)?.cost;
        record.oracle_cost = Some(opt);
        record.additive_bound = Some(opt + additive);
    }
    record.check_bounds();
    let params = s.params(&[("k", args.k.to_string()), ("l", l.to_string())]);
    finish(&inst, &solution, &args.algo, params, args.instance.display().to_string(), record, args.out.as_deref())
}

fn cmd_bench(args: &BenchArgs, exec: Exec) -> CliResult<bool> {
    let text = std::fs::read_to_string(&args.config).map_err(|e| Failure::from(Error::from(e)))?;
    let config = BenchConfig::from_toml(&text)?;
    let report = bench::run(&config, exec)?;
    write_output(args.out.as_deref(), &report.to_csv())?;
    if !report.findings.is_empty() {
        let json = report.findings_json();
        match &args.out {
            Some(out) => write_output(Some(&PathBuf::from(format!("{}.findings.json", out.display()))), &json)?,
            None => eprint!("{json}"),
        }
    }
    let violations = report.violations();
    if violations > 0 {
        eprintln!("{violations} bound violation(s)");
    }
    Ok(violations == 0)
}

fn run(cli: &Cli) -> CliResult<u8> {
    let threads = cli
        .threads
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    if threads == 0 {
        return Err(Failure::usage("--threads must be positive"));
    }
    let exec = if threads == 1 { Exec::Sequential } else { Exec::Parallel };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Failure { code: EXIT_FAILURE, message: e.to_string() })?;
    pool.install(|| match &cli.command {
        Command::Gen(a) => cmd_gen(a).map(|_| 0),
        Command::Solve(a) => cmd_solve(a, exec, threads).map(|_| 0),
        Command::Reopt(a) => cmd_reopt(a, exec, threads).map(|_| 0),
        Command::Bench(a) => cmd_bench(a, exec).map(|ok| if ok { 0 } else { EXIT_BOUND }),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
