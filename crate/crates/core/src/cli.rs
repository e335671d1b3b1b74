//! Command-line front end: `sample`, `regions`, `cdf`, `validate`, `bench`.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 infeasible problem,
//! 3 rejection budget exhausted, 4 a validation gate failed.

use std::ffi::OsString;
use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::analysis::bench::{self, BenchConfig, DEFAULT_AREAS, DEFAULT_NS};
use crate::analysis::validate;
use crate::error::Error;
use crate::oracle;
use crate::problem::Problem;
use crate::regions::DEFAULT_MAX_N;
use crate::sampler::{Method, Sampler, DEFAULT_REJECTION_BUDGET};

/// Environment variable overriding the cap on N.
pub const MAX_N_ENV: &str = "OSTRUNC_MAX_N";

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INFEASIBLE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_GATE_FAILED: i32 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "ostrunc",
    version,
    about = "Sample bounded k-th order statistics of independent, non-identical variates"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Draw samples and write them as CSV.
    Sample(SampleArgs),
    /// Print the region table as CSV.
    Regions(RegionsArgs),
    /// Print the truncated order-statistic CDF at the given points.
    Cdf(CdfArgs),
    /// Run the KS/DKW validation gates and print a pass/fail table.
    Validate(ValidateArgs),
    /// Time both samplers over a sweep of bounds and draw counts.
    Bench(BenchArgs),
}

#[derive(Args, Debug)]
struct ProblemArgs {
    /// Problem document (JSON).
    #[arg(long)]
    spec: PathBuf,
    /// Override the lower bound A (number, "-inf").
    #[arg(long, allow_hyphen_values = true, value_parser = parse_extended_real)]
    lower: Option<f64>,
    /// Override the upper bound B (number, "inf").
    #[arg(long, allow_hyphen_values = true, value_parser = parse_extended_real)]
    upper: Option<f64>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MethodArg {
    Mapped,
    Rejection,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Mapped => Method::Mapped,
            MethodArg::Rejection => Method::Rejection,
        }
    }
}

#[derive(Args, Debug)]
struct SampleArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    /// Number of draws.
    #[arg(long)]
    n: usize,
    /// Seed for the uniform stream.
    #[arg(long)]
    seed: u64,
    /// Sampling method.
    #[arg(long, value_enum, default_value = "mapped")]
    method: MethodArg,
    /// Output CSV path; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Add region, u, uprime and x columns.
    #[arg(long)]
    trace: bool,
    /// Rejection attempts allowed per draw.
    #[arg(long, default_value_t = DEFAULT_REJECTION_BUDGET)]
    budget: u64,
}

#[derive(Args, Debug)]
struct RegionsArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    /// Output CSV path; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CdfArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    /// Comma-separated evaluation points.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    at: Vec<f64>,
}

#[derive(Args, Debug)]
struct ValidateArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    /// Draws per method.
    #[arg(long)]
    n: usize,
    #[arg(long)]
    seed: u64,
}

#[derive(Args, Debug)]
struct BenchArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    /// Target probability masses for the swept bounds. Ignored when both
    /// --lower and --upper are given.
    #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_AREAS)]
    areas: Vec<f64>,
    /// Draw counts per cell.
    #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_NS)]
    ns: Vec<usize>,
    #[arg(long)]
    seed: u64,
    /// Output CSV path; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Timed repetitions per cell (best is kept).
    #[arg(long, default_value_t = 3)]
    repetitions: usize,
    /// Rejection attempts allowed per draw.
    #[arg(long, default_value_t = DEFAULT_REJECTION_BUDGET)]
    budget: u64,
}

fn parse_extended_real(s: &str) -> Result<f64, String> {
    let v = match s {
        "inf" | "+inf" => f64::INFINITY,
        "-inf" => f64::NEG_INFINITY,
        _ => s.parse::<f64>().map_err(|e| format!("{s:?}: {e}"))?,
    };
    if v.is_nan() {
        return Err("NaN is not a valid bound".into());
    }
    Ok(v)
}

/// Formats a real with 17 significant digits.
pub fn fmt_real(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else if v.is_nan() {
        "nan".into()
    } else if v > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Infeasible => EXIT_INFEASIBLE,
            Error::BudgetExhausted { .. } => EXIT_BUDGET,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        if e.kind() == io::ErrorKind::BrokenPipe {
            // The reader went away (e.g. `| head`); nothing left to report.
            return Failure {
                code: EXIT_OK,
                message: String::new(),
            };
        }
        Failure {
            code: EXIT_USAGE,
            message: format!("i/o error: {e}"),
        }
    }
}

fn max_n() -> Result<usize, Failure> {
    match std::env::var(MAX_N_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| Failure {
            code: EXIT_USAGE,
            message: format!("{MAX_N_ENV}: expected a positive integer, got {v:?}"),
        }),
        Err(_) => Ok(DEFAULT_MAX_N),
    }
}

fn load_problem(args: &ProblemArgs) -> Result<Problem, Failure> {
    let text = fs::read_to_string(&args.spec).map_err(|e| Failure {
        code: EXIT_USAGE,
        message: format!("cannot read spec {}: {e}", args.spec.display()),
    })?;
    let problem = Problem::from_json(&text)?;
    if args.lower.is_none() && args.upper.is_none() {
        return Ok(problem);
    }
    let lower = args.lower.unwrap_or(problem.lower());
    let upper = args.upper.unwrap_or(problem.upper());
    Ok(problem.with_bounds(lower, upper)?)
}

fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(fs::File::create(p).map_err(|e| Failure {
            code: EXIT_USAGE,
            message: format!("cannot create {}: {e}", p.display()),
        })?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn sample(args: &SampleArgs) -> Result<(), Failure> {
    let problem = load_problem(&args.problem)?;
    let n_vars = problem.n();
    let sampler = Sampler::with_cap(problem, max_n()?)?.with_rejection_budget(args.budget);
    let method = Method::from(args.method);
    let mut out = open_output(args.out.as_deref())?;

    let mut header = vec!["y".to_string()];
    if args.trace {
        header.push("region".into());
        for prefix in ["u", "uprime", "x"] {
            header.extend((1..=n_vars).map(|i| format!("{prefix}{i}")));
        }
    }
    if method == Method::Rejection {
        header.push("attempts".into());
    }
    writeln!(out, "{}", header.join(","))?;

    let records = sampler.draw_many(args.n, args.seed, method)?;
    let mut line = String::new();
    for rec in &records {
        line.clear();
        line.push_str(&fmt_real(rec.y));
        if args.trace {
            line.push(',');
            if let Some(s) = rec.region {
                line.push_str(&(s + 1).to_string());
            }
            for v in rec.u.iter().chain(&rec.u_prime).chain(&rec.x) {
                line.push(',');
                line.push_str(&fmt_real(*v));
            }
        }
        if method == Method::Rejection {
            line.push(',');
            line.push_str(&rec.attempts.to_string());
        }
        writeln!(out, "{line}")?;
    }
    out.flush()?;
    Ok(())
}

fn regions(args: &RegionsArgs) -> Result<(), Failure> {
    let problem = load_problem(&args.problem)?;
    let sampler = Sampler::with_cap(problem, max_n()?)?;
    let table = sampler.table();
    let mut out = open_output(args.out.as_deref())?;
    writeln!(out, "index,assignment,volume,fraction,cumulative")?;
    for (i, region) in table.regions().iter().enumerate() {
        writeln!(
            out,
            "{},{},{},{},{}",
            i + 1,
            region.code(),
            fmt_real(region.volume),
            fmt_real(table.fractions()[i]),
            fmt_real(table.cumulative()[i]),
        )?;
    }
    out.flush()?;
    Ok(())
}

fn cdf(args: &CdfArgs) -> Result<(), Failure> {
    let problem = load_problem(&args.problem)?;
    let mut out = open_output(None)?;
    writeln!(out, "y,F_truncated")?;
    for &y in &args.at {
        let f = oracle::truncated_cdf(&problem, y)?;
        writeln!(out, "{},{}", fmt_real(y), fmt_real(f))?;
    }
    out.flush()?;
    Ok(())
}

fn run_validate(args: &ValidateArgs) -> Result<(), Failure> {
    if args.n == 0 {
        return Err(Failure {
            code: EXIT_USAGE,
            message: "--n must be at least 1".into(),
        });
    }
    let problem = load_problem(&args.problem)?;
    let sampler = Sampler::with_cap(problem, max_n()?)?;
    let report = validate::validate(&sampler, args.n, args.seed)?;
    let mut out = open_output(None)?;
    writeln!(
        out,
        "n = {}, P(A<Y<B) = {}",
        report.n,
        fmt_real(report.acceptance_probability)
    )?;
    writeln!(out, "{:<24} {:>14} {:>14}  result", "gate", "statistic", "threshold")?;
    for gate in &report.gates {
        writeln!(out, "{gate}")?;
    }
    out.flush()?;
    if report.passed() {
        Ok(())
    } else {
        let failed: Vec<&str> = report.gates.iter().filter(|g| !g.passed).map(|g| g.name).collect();
        Err(Failure {
            code: EXIT_GATE_FAILED,
            message: format!("validation failed: {}", failed.join(", ")),
        })
    }
}

fn run_bench(args: &BenchArgs) -> Result<(), Failure> {
    let problem = load_problem(&args.problem)?;
    let bounds = match (args.problem.lower, args.problem.upper) {
        (Some(lower), Some(upper)) => vec![(lower, upper)],
        _ => args
            .areas
            .iter()
            .map(|&area| bench::bounds_for_area(&problem, area))
            .collect::<Result<Vec<_>, _>>()?,
    };
    let config = BenchConfig {
        repetitions: args.repetitions,
        rejection_budget: args.budget,
        ..BenchConfig::default()
    };
    let report = bench::bench_compare(&problem, &bounds, &args.ns, args.seed, &config)?;
    for (label, seconds) in &report.table_build_seconds {
        eprintln!("table build {label}: {} s", fmt_real(*seconds));
    }
    let mut out = open_output(args.out.as_deref())?;
    writeln!(out, "bounds,pdf_area,n,method,total_s,per_draw_s,attempts_mean,status")?;
    for row in &report.rows {
        writeln!(
            out,
            "\"{}\",{},{},{},{},{},{},{}",
            row.bounds_label,
            fmt_real(row.pdf_area),
            row.n,
            row.method,
            fmt_real(row.total_seconds),
            fmt_real(row.per_draw_seconds),
            fmt_real(row.attempts_mean),
            row.status,
        )?;
    }
    out.flush()?;
    Ok(())
}

fn dispatch(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Sample(a) => sample(a),
        Command::Regions(a) => regions(a),
        Command::Cdf(a) => cdf(a),
        Command::Validate(a) => run_validate(a),
        Command::Bench(a) => run_bench(a),
    }
}

/// Parses `argv` (including the program name) and runs the subcommand.
/// Returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            if !f.message.is_empty() {
                eprintln!("error: {}", f.message);
            }
            f.code
        }
    }
}
