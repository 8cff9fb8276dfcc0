//! Command-line front end. Results go to stdout, diagnostics to stderr.
//!
//! Exit codes: 0 success, 1 other failure, 2 parse/validation failure,
//! 3 `iterate` hit its iteration cap, 4 `iterate` found a bound violation.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::corpus::{build_example, example_nadler_estimate, export_problem, verify_example, TauSequence, VerifyOptions};
use crate::error::{Error, Result};
use crate::exact::Exact;
use crate::gauge::{
    check_geraghty_class, check_mizoguchi_takahashi, distinct_pairs, estimate_nadler_constant, halving_grid, Gauge,
    MtVerdict, Verdict,
};
use crate::hausdorff::hyperspace_distance;
use crate::numeric::{set_float_tolerance, NumericMode, Scalar};
use crate::problem::{parse_gauge, ProblemFile};
use crate::solver::{iterate, Outcome, DEFAULT_MAX_ITER};

/// Environment variable overriding the float comparison tolerance.
pub const TOLERANCE_ENV: &str = "HAUSFIX_FLOAT_TOLERANCE";

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_MAX_ITER: i32 = 3;
pub const EXIT_BOUND_VIOLATION: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "hausfix", version, about = "Hausdorff distances, contraction gauges and set-valued fixed points")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Hausdorff distance between two sets of a problem file.
    Hausdorff(HausdorffArgs),
    /// Run the fixed-point iteration described by a problem file.
    Iterate(IterateArgs),
    /// Check every claim of the built-in worked instance.
    VerifyExample(VerifyArgs),
    /// Class-S and Mizoguchi–Takahashi checks for a gauge on a probe set.
    CheckGauge(CheckGaugeArgs),
    /// Largest observed H(Tx, Ty) / d(x, y) over all pairs of points.
    NadlerConstant(NadlerArgs),
    /// Write the worked instance as a problem file.
    ExportExample(ExportArgs),
}

#[derive(Args, Debug)]
struct HausdorffArgs {
    #[arg(long)]
    file: PathBuf,
    /// A named set of the file, or comma-separated point ids.
    #[arg(long)]
    a: String,
    #[arg(long)]
    b: String,
}

#[derive(Args, Debug)]
struct IterateArgs {
    #[arg(long)]
    file: PathBuf,
    /// Overrides `solver.tol` of the file.
    #[arg(long)]
    tol: Option<String>,
    /// Overrides `solver.max_iter` of the file.
    #[arg(long)]
    max_iter: Option<usize>,
    /// Write the trace as CSV to this path.
    #[arg(long)]
    trace_out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, default_value_t = 30)]
    depth: usize,
    /// Candidate Nadler constants to falsify (repeatable).
    #[arg(long = "nadler-r")]
    nadler_r: Vec<String>,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct CheckGaugeArgs {
    /// Gauge spec as JSON, e.g. `{"kind": "constant", "value": "1/2"}`.
    #[arg(long, conflicts_with = "example_gauge")]
    gauge: Option<String>,
    /// Use the worked instance's gauge at this depth (rational mode).
    #[arg(long)]
    example_gauge: Option<usize>,
    #[arg(long, value_enum, default_value = "rational")]
    mode: ModeArg,
    /// Comma-separated probe values.
    #[arg(long)]
    probes: Option<String>,
    /// Integer probes `a..b` (inclusive).
    #[arg(long)]
    probe_range: Option<String>,
    /// Probes tau_1..tau_N (the default with --example-gauge N).
    #[arg(long)]
    probe_tau: Option<usize>,
    /// Epsilon grid 1/2, 1/4, ... of this length.
    #[arg(long, default_value_t = 10)]
    eps_count: usize,
    #[arg(long, default_value = "0")]
    t0: String,
    /// Delta schedule 1, 1/2, ... of this length.
    #[arg(long, default_value_t = 30)]
    delta_count: usize,
    #[arg(long)]
    json: bool,
}

#[derive(clap::ValueEnum, Clone, Copy, Debug)]
enum ModeArg {
    Rational,
    Float,
}

#[derive(Args, Debug)]
struct NadlerArgs {
    /// Problem file with a map; all pairs of its points are sampled.
    #[arg(long, conflicts_with = "example")]
    file: Option<PathBuf>,
    /// Use the worked instance, pairs among x_1..x_N.
    #[arg(long)]
    example: Option<usize>,
}

#[derive(Args, Debug)]
struct ExportArgs {
    #[arg(long, default_value_t = 6)]
    depth: usize,
    /// Output path (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Run the CLI on the process arguments and return the exit code.
pub fn main() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

/// Run the CLI on `args` (including the program name).
pub fn run(args: impl IntoIterator<Item = OsString>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    if let Ok(value) = std::env::var(TOLERANCE_ENV) {
        let parsed = value.trim().parse::<f64>().map_err(|e| Error::parse(TOLERANCE_ENV, e.to_string()));
        if let Err(e) = parsed.and_then(set_float_tolerance) {
            let _ = writeln!(err, "error: {e}");
            return EXIT_INVALID;
        }
    }
    let result = match cli.command {
        Command::Hausdorff(a) => cmd_hausdorff(&a, out),
        Command::Iterate(a) => cmd_iterate(&a, out, err),
        Command::VerifyExample(a) => cmd_verify_example(&a, out),
        Command::CheckGauge(a) => cmd_check_gauge(&a, out),
        Command::NadlerConstant(a) => cmd_nadler(&a, out),
        Command::ExportExample(a) => cmd_export(&a, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. }
        | Error::ModeMismatch(_)
        | Error::InvalidTable(_)
        | Error::InvalidArgument(_)
        | Error::CodomainViolation { .. }
        | Error::NegativeArgument(_)
        | Error::EmptyProbeSet
        | Error::NoProbesRightOfT0(_)
        | Error::EmptySet
        | Error::LevelMismatch { .. }
        | Error::LevelTooDeep { .. }
        | Error::ZeroDistancePair(..)
        | Error::DomainEscape(_) => EXIT_INVALID,
        _ => EXIT_FAILURE,
    }
}

fn io_error(e: std::io::Error) -> Error {
    Error::InvalidArgument(format!("output: {e}"))
}

/// `p/q` when the value is a moderate rational, a decimal otherwise.
pub fn render_scalar<S: Scalar>(v: &S) -> String {
    let text = v.to_string();
    match text.strip_prefix('~') {
        Some(decimal) => decimal.to_string(),
        None => text,
    }
}

fn cmd_hausdorff(args: &HausdorffArgs, out: &mut dyn Write) -> Result<i32> {
    let file = ProblemFile::load(&args.file)?;
    match file.mode {
        NumericMode::Rational => hausdorff_in::<Exact>(&file, args, out),
        NumericMode::Float => hausdorff_in::<f64>(&file, args, out),
    }
}

fn hausdorff_in<S: Scalar>(file: &ProblemFile, args: &HausdorffArgs, out: &mut dyn Write) -> Result<i32> {
    let problem = file.resolve::<S>()?;
    let a = problem.set_arg(&args.a, "--a")?;
    let b = problem.set_arg(&args.b, "--b")?;
    let h = hyperspace_distance(&problem.metric, &a, &b)?;
    writeln!(out, "{}", render_scalar(&h)).map_err(io_error)?;
    Ok(EXIT_OK)
}

fn cmd_iterate(args: &IterateArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let file = ProblemFile::load(&args.file)?;
    match file.mode {
        NumericMode::Rational => iterate_in::<Exact>(&file, args, out, err),
        NumericMode::Float => iterate_in::<f64>(&file, args, out, err),
    }
}

fn iterate_in<S: Scalar>(file: &ProblemFile, args: &IterateArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let problem = file.resolve::<S>()?;
    let map = problem.map.as_ref().ok_or_else(|| Error::parse("map", "missing"))?;
    let gauge = problem.gauge.as_ref().ok_or_else(|| Error::parse("gauge", "missing"))?;
    let solver = problem.solver.as_ref().ok_or_else(|| Error::parse("solver", "missing"))?;
    let tol = match &args.tol {
        Some(t) => S::parse_literal(t).map_err(|e| Error::parse("--tol", e.to_string()))?,
        None => solver.tol.clone().ok_or_else(|| Error::parse("solver.tol", "missing (or pass --tol)"))?,
    };
    let max_iter = args.max_iter.or(solver.max_iter).unwrap_or(DEFAULT_MAX_ITER);
    let trace = iterate(map, &problem.metric, gauge, &solver.x0, &tol, max_iter)?;
    if let Some(path) = &args.trace_out {
        let f = std::fs::File::create(path).map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))?;
        trace.write_csv(f)?;
    }
    writeln!(out, "{}", trace.summary()).map_err(io_error)?;
    Ok(match &trace.outcome {
        Outcome::FixedPoint { .. } => EXIT_OK,
        Outcome::MaxIterExceeded => {
            let _ = writeln!(err, "iteration cap {max_iter} reached");
            EXIT_MAX_ITER
        }
        Outcome::BoundViolation { step, .. } => {
            let _ = writeln!(err, "selection bound violated at step {step}");
            EXIT_BOUND_VIOLATION
        }
    })
}

fn cmd_verify_example(args: &VerifyArgs, out: &mut dyn Write) -> Result<i32> {
    let mut options = VerifyOptions::default();
    if !args.nadler_r.is_empty() {
        options.nadler_r = args
            .nadler_r
            .iter()
            .map(|r| Exact::parse(r).ok_or_else(|| Error::parse("--nadler-r", format!("`{r}` is not a number"))))
            .collect::<Result<_>>()?;
    }
    let report = verify_example(args.depth, &options)?;
    if args.json {
        let text = serde_json::to_string_pretty(&report).map_err(|e| Error::InvalidArgument(e.to_string()))?;
        writeln!(out, "{text}").map_err(io_error)?;
    } else {
        writeln!(out, "{report}").map_err(io_error)?;
    }
    Ok(EXIT_OK)
}

fn cmd_check_gauge(args: &CheckGaugeArgs, out: &mut dyn Write) -> Result<i32> {
    if let Some(depth) = args.example_gauge {
        let gauge = build_example(depth)?.gauge;
        return check_gauge_in(&gauge, args, out);
    }
    let spec = args.gauge.as_deref().ok_or_else(|| Error::parse("--gauge", "give --gauge or --example-gauge"))?;
    match args.mode {
        ModeArg::Rational => check_gauge_in(&parse_gauge::<Exact>(spec)?, args, out),
        ModeArg::Float => check_gauge_in(&parse_gauge::<f64>(spec)?, args, out),
    }
}

fn probes<S: Scalar>(args: &CheckGaugeArgs) -> Result<Vec<S>> {
    let mut probes = Vec::new();
    if let Some(list) = &args.probes {
        for p in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            probes.push(S::parse_literal(p).map_err(|e| Error::parse("--probes", e.to_string()))?);
        }
    }
    if let Some(range) = &args.probe_range {
        let bad = || Error::parse("--probe-range", format!("`{range}` is not of the form a..b"));
        let (a, b) = range.split_once("..").ok_or_else(bad)?;
        let (a, b): (i64, i64) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
        probes.extend((a..=b).map(|k| S::from_ratio(k, 1)));
    }
    let tau_depth = args.probe_tau.or(match (&args.probes, &args.probe_range) {
        (None, None) => args.example_gauge,
        _ => None,
    });
    if let Some(n) = tau_depth {
        probes.extend(TauSequence::new(n).values().iter().map(S::from_exact));
    }
    if probes.is_empty() {
        return Err(Error::EmptyProbeSet);
    }
    Ok(probes)
}

fn check_gauge_in<S: Scalar>(gauge: &Gauge<S>, args: &CheckGaugeArgs, out: &mut dyn Write) -> Result<i32> {
    let probes = probes::<S>(args)?;
    let eps = halving_grid(S::from_ratio(1, 2), args.eps_count);
    let t0 = S::parse_literal(&args.t0).map_err(|e| Error::parse("--t0", e.to_string()))?;
    let deltas = halving_grid(S::one(), args.delta_count);
    let geraghty = check_geraghty_class(gauge, &probes, &eps)?;
    let mt = check_mizoguchi_takahashi(gauge, &t0, &probes, &deltas)?;
    if args.json {
        let value = serde_json::json!({ "geraghty": geraghty, "mizoguchi_takahashi": mt });
        writeln!(out, "{}", serde_json::to_string_pretty(&value).expect("reports serialize")).map_err(io_error)?;
        return Ok(EXIT_OK);
    }
    let word = match geraghty.verdict {
        Verdict::Pass => "PASS",
        Verdict::Fail => "FAIL",
        Verdict::Inconclusive => "INCONCLUSIVE",
    };
    writeln!(out, "class S: {word}").map_err(io_error)?;
    for (e, s) in geraghty.epsilons.iter().zip(&geraghty.sup_t) {
        let s = s.as_ref().map_or("none".to_string(), render_scalar);
        writeln!(out, "  eps {}: s = {s}", render_scalar(e)).map_err(io_error)?;
    }
    let word = match mt.verdict {
        MtVerdict::Pass => "PASS-MT",
        MtVerdict::Fail => "FAIL-MT",
    };
    writeln!(
        out,
        "{word}: limsup estimate at t0 = {} is {} (~{:.6}, smallest window {})",
        render_scalar(&mt.t0),
        render_scalar(&mt.limsup_estimate),
        mt.limsup_estimate.to_f64(),
        render_scalar(&mt.final_delta)
    )
    .map_err(io_error)?;
    Ok(EXIT_OK)
}

fn cmd_nadler(args: &NadlerArgs, out: &mut dyn Write) -> Result<i32> {
    if let Some(depth) = args.example {
        let est = example_nadler_estimate(depth)?;
        return print_nadler(&est.ratio, &est.witness.0.to_string(), &est.witness.1.to_string(), est.pairs, out);
    }
    let path = args.file.as_ref().ok_or_else(|| Error::parse("--file", "give --file or --example"))?;
    let file = ProblemFile::load(path)?;
    match file.mode {
        NumericMode::Rational => nadler_in::<Exact>(&file, out),
        NumericMode::Float => nadler_in::<f64>(&file, out),
    }
}

fn nadler_in<S: Scalar>(file: &ProblemFile, out: &mut dyn Write) -> Result<i32> {
    let problem = file.resolve::<S>()?;
    let map = problem.map.as_ref().ok_or_else(|| Error::parse("map", "missing"))?;
    let points = map.domain().unwrap_or_else(|| problem.points.clone());
    let est = estimate_nadler_constant(map, &problem.metric, &distinct_pairs(&points))?;
    print_nadler(&est.ratio, &est.witness.0.to_string(), &est.witness.1.to_string(), est.pairs, out)
}

fn print_nadler<S: Scalar>(ratio: &S, a: &str, b: &str, pairs: usize, out: &mut dyn Write) -> Result<i32> {
    writeln!(out, "{} (~{:.6}) at ({a}, {b}) over {pairs} pairs", render_scalar(ratio), ratio.to_f64()).map_err(io_error)?;
    Ok(EXIT_OK)
}

fn cmd_export(args: &ExportArgs, out: &mut dyn Write) -> Result<i32> {
    let json = export_problem(args.depth)?.to_json();
    match &args.out {
        Some(path) => std::fs::write(path, json + "\n").map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))?,
        None => writeln!(out, "{json}").map_err(io_error)?,
    }
    Ok(EXIT_OK)
}
