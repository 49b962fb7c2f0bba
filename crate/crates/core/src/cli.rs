//! The `mertens-audit` command line.
//!
//! Exit codes: 0 when every gated check passes, 1 when a gated check fails,
//! 2 on a usage error, 3 on an I/O failure. Report-only findings never
//! change the exit code.

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};

use crate::bounds::{
    epsilon_for, estimate, probabilistic_bound, satisfied_fraction, sweep_report, write_sweep_csv, EpsilonChoice,
};
use crate::inversion::{write_trace_csv, TraceRow};
use crate::quadrature::MIN_TOLERANCE;
use crate::report::{fmt_g17, summarize, write_check_csv, CheckReport};
use crate::sieve::{load_table, mertens_scan, save_table, MertensTable, DEFAULT_BLOCK_SIZE, DEFAULT_STRIDE};
use crate::suites;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_GATED_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Build a checkpointed M(n) table and write it to --out.
    Sieve,
    /// Evaluate the estimator at --x.
    Estimate,
    /// Estimator vs |M(x)| over n ∈ [--n-lo, --n-hi] at --theta.
    Sweep,
    /// Principal-value quadrature vs closed forms.
    PvCheck,
    /// Partial-sum/integral bound for the monotone catalog.
    Theorem1,
    /// Digamma identity on seeded samples.
    DnCheck,
    /// Partial Möbius inverse and forward step-transform traces.
    InverseCheck,
    /// Semiaxis transform roundtrip and the additive pair.
    PairCheck,
    /// Everything, written into the --out directory; needs --table.
    ReportAll,
}

#[derive(Debug, Parser)]
#[command(name = "mertens-audit", version, about = "Mertens function tables and estimator audits")]
struct Args {
    command: Command,
    #[arg(long)]
    limit: Option<u64>,
    #[arg(long)]
    stride: Option<u64>,
    #[arg(long = "block-size")]
    block_size: Option<u64>,
    #[arg(long)]
    table: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    x: Option<f64>,
    #[arg(long)]
    theta: Option<f64>,
    #[arg(long = "n-lo")]
    n_lo: Option<u64>,
    #[arg(long = "n-hi")]
    n_hi: Option<u64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    mu: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long, default_value_t = 1e-8)]
    tolerance: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub table_path: Option<PathBuf>,
    pub limit: Option<u64>,
    pub stride: Option<u64>,
    pub block_size: u64,
    pub tolerance: f64,
    pub output_path: Option<PathBuf>,
    pub seed: u64,
    pub x: Option<f64>,
    pub theta: f64,
    pub n_lo: u64,
    pub n_hi: u64,
    pub alpha: Option<f64>,
    pub mu: Option<f64>,
    pub epsilon: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum UsageError {
    /// --help or --version; the text goes to stdout and the exit code is 0.
    Info(String),
    Invalid(String),
}

impl UsageError {
    pub fn exit_code(&self) -> i32 {
        match self {
            UsageError::Info(_) => EXIT_PASS,
            UsageError::Invalid(_) => EXIT_USAGE,
        }
    }
}

fn invalid(msg: impl Into<String>) -> UsageError {
    UsageError::Invalid(msg.into())
}

/// `argv` excludes the program name.
pub fn parse_args<I, S>(argv: I) -> Result<RunConfig, UsageError>
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let args = std::iter::once(std::ffi::OsString::from("mertens-audit")).chain(argv.into_iter().map(Into::into));
    let a = Args::try_parse_from(args).map_err(|e| match e.kind() {
        clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => UsageError::Info(e.to_string()),
        _ => UsageError::Invalid(e.to_string()),
    })?;

    if !(a.tolerance >= MIN_TOLERANCE) {
        return Err(invalid(format!("--tolerance must be at least {MIN_TOLERANCE:e}")));
    }
    if a.limit == Some(0) {
        return Err(invalid("--limit must be positive"));
    }
    if a.stride == Some(0) || a.block_size == Some(0) {
        return Err(invalid("--stride and --block-size must be positive"));
    }
    if let (Some(l), Some(s)) = (a.limit, a.stride) {
        if s > l {
            return Err(invalid(format!("--stride {s} exceeds --limit {l}")));
        }
    }
    let theta = a.theta.unwrap_or(suites::SWEEP_THETA);
    if !(theta > 0.0 && theta < 1.0) {
        return Err(invalid("--theta must lie in (0, 1)"));
    }
    if let Some(al) = a.alpha {
        if !(al > 0.0 && al < 1.0) {
            return Err(invalid("--alpha must lie in (0, 1)"));
        }
    }
    if let Some(x) = a.x {
        if !(x.is_finite() && x > 0.0) {
            return Err(invalid("--x must be positive and finite"));
        }
    }
    match a.command {
        Command::Sieve if a.limit.is_none() || a.out.is_none() => {
            return Err(invalid("sieve needs --limit and --out"));
        }
        Command::Estimate if a.x.is_none() => return Err(invalid("estimate needs --x")),
        Command::ReportAll if a.out.is_none() => return Err(invalid("report-all needs --out <dir>")),
        Command::PvCheck if a.mu.is_some() != a.epsilon.is_some() || (a.mu.is_some() && a.x.is_none()) => {
            return Err(invalid("pv-check takes --mu, --epsilon and --x together or not at all"));
        }
        _ => {}
    }
    let n_lo = a.n_lo.unwrap_or(suites::SWEEP_N_LO);
    let n_hi = a.n_hi.unwrap_or(suites::SWEEP_N_HI);
    if n_lo == 0 {
        return Err(invalid("--n-lo must be positive"));
    }
    Ok(RunConfig {
        command: a.command,
        table_path: a.table,
        limit: a.limit,
        stride: a.stride,
        block_size: a.block_size.unwrap_or(DEFAULT_BLOCK_SIZE),
        tolerance: a.tolerance,
        output_path: a.out,
        seed: a.seed,
        x: a.x,
        theta,
        n_lo,
        n_hi,
        alpha: a.alpha,
        mu: a.mu,
        epsilon: a.epsilon,
    })
}

#[derive(Debug)]
enum RunError {
    Usage(String),
    Io(String),
    /// A gated computation could not be carried out.
    Failed(String),
}

impl RunError {
    fn exit_code(&self) -> i32 {
        match self {
            RunError::Usage(_) => EXIT_USAGE,
            RunError::Io(_) => EXIT_IO,
            RunError::Failed(_) => EXIT_GATED_FAILURE,
        }
    }

    fn message(&self) -> &str {
        match self {
            RunError::Usage(m) | RunError::Io(m) | RunError::Failed(m) => m,
        }
    }
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> RunError {
    RunError::Io(format!("{}: {e}", path.display()))
}

fn failed(e: impl std::fmt::Display) -> RunError {
    RunError::Failed(e.to_string())
}

/// Runs the configured command and returns the process exit code.
pub fn run(config: &RunConfig) -> i32 {
    match execute(config) {
        Ok(all_pass) => {
            if all_pass {
                EXIT_PASS
            } else {
                EXIT_GATED_FAILURE
            }
        }
        Err(e) => {
            eprintln!("mertens-audit: {}", e.message());
            e.exit_code()
        }
    }
}

fn all_pass(reports: &[CheckReport]) -> bool {
    reports.iter().all(|r| r.pass() != Some(false))
}

fn create(path: &Path) -> Result<BufWriter<File>, RunError> {
    File::create(path).map(BufWriter::new).map_err(|e| io_err(path, e))
}

/// Writes through `f` to --out, or to stdout when no path was given.
fn emit<F>(out: Option<&Path>, f: F) -> Result<(), RunError>
where
    F: FnOnce(&mut dyn Write) -> io::Result<()>,
{
    match out {
        Some(p) => {
            let mut w = create(p)?;
            f(&mut w).map_err(|e| io_err(p, e))
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            f(&mut lock).map_err(|e| RunError::Io(format!("stdout: {e}")))
        }
    }
}

/// Loads --table, or builds a table up to --limit (or `fallback_limit`).
fn obtain_table(config: &RunConfig, fallback_limit: u64) -> Result<MertensTable, RunError> {
    if let Some(p) = &config.table_path {
        return load_table(p).map_err(|e| io_err(p, e));
    }
    let limit = config.limit.unwrap_or(fallback_limit);
    build_table(config, limit)
}

fn build_table(config: &RunConfig, limit: u64) -> Result<MertensTable, RunError> {
    let stride = config.stride.unwrap_or(DEFAULT_STRIDE.min(limit));
    if stride > limit {
        return Err(RunError::Usage(format!("stride {stride} exceeds limit {limit}")));
    }
    mertens_scan(limit, stride, config.block_size).map_err(|e| RunError::Usage(e.to_string()))
}

fn write_checks(out: Option<&Path>, reports: &[CheckReport]) -> Result<bool, RunError> {
    emit(out, |w| write_check_csv(reports, w))?;
    if out.is_some() {
        print!("{}", summarize(reports));
    }
    Ok(all_pass(reports))
}

fn execute(config: &RunConfig) -> Result<bool, RunError> {
    let out = config.output_path.as_deref();
    match config.command {
        Command::Sieve => {
            let limit = config.limit.expect("validated");
            let table = build_table(config, limit)?;
            let path = out.expect("validated");
            save_table(&table, path).map_err(|e| io_err(path, e))?;
            println!(
                "limit={} stride={} checkpoints={} M(limit)={}",
                table.limit(),
                table.stride(),
                table.checkpoints().len(),
                table.mertens_int(table.limit()).map_err(failed)?
            );
            Ok(true)
        }
        Command::Estimate => run_estimate(config, out),
        Command::Sweep => {
            if config.n_lo > config.n_hi {
                return Err(RunError::Usage("--n-lo exceeds --n-hi".into()));
            }
            let table = obtain_table(config, config.n_hi + 1)?;
            let records = sweep_report(config.n_lo, config.n_hi, config.theta, &table)
                .map_err(|e| RunError::Usage(e.to_string()))?;
            emit(out, |w| write_sweep_csv(&records, w))?;
            eprintln!(
                "{} points, fraction with |M(x)| < estimate: {}",
                records.len(),
                fmt_g17(satisfied_fraction(&records))
            );
            Ok(true)
        }
        Command::PvCheck => {
            let reports = match (config.mu, config.epsilon, config.x) {
                (Some(mu), Some(e), Some(x)) => vec![single_pv(mu, e, x, config.tolerance)?],
                _ => suites::pv_suite(config.tolerance).map_err(failed)?,
            };
            write_checks(out, &reports)
        }
        Command::Theorem1 => {
            let x = config.x.unwrap_or(suites::DEFAULT_SHIFT_X);
            let reports = suites::theorem1_suite(x).map_err(|e| RunError::Usage(e.to_string()))?;
            write_checks(out, &reports)
        }
        Command::DnCheck => {
            let reports = suites::dn_suite(config.seed).map_err(failed)?;
            write_checks(out, &reports)
        }
        Command::InverseCheck => {
            let table = obtain_table(config, *suites::TRACE_UPTOS.last().expect("non-empty"))?;
            let x = config.x.unwrap_or(suites::DEFAULT_TRACE_X);
            let rows = suites::inverse_traces(&table, x).map_err(|e| RunError::Usage(e.to_string()))?;
            emit(out, |w| write_trace_csv(&rows, w))?;
            Ok(true)
        }
        Command::PairCheck => {
            let reports = suites::pair_suite(config.tolerance).map_err(failed)?;
            write_checks(out, &reports)
        }
        Command::ReportAll => report_all(config),
    }
}

fn run_estimate(config: &RunConfig, out: Option<&Path>) -> Result<bool, RunError> {
    let x = config.x.expect("validated");
    let choice: EpsilonChoice = match config.epsilon {
        Some(e) => EpsilonChoice { x, n: x.floor() as u64, theta: 1.0 - e, epsilon: e },
        None => epsilon_for(x).map_err(|e| RunError::Usage(e.to_string()))?,
    };
    let value = estimate(x, choice.epsilon).map_err(|e| RunError::Usage(e.to_string()))?;
    let prob =
        config.alpha.map(|a| probabilistic_bound(x, a)).transpose().map_err(|e| RunError::Usage(e.to_string()))?;
    let mertens = match (&config.table_path, config.limit) {
        (None, None) => None,
        _ => {
            let table = obtain_table(config, 0)?;
            Some(table.mertens_at(x).map_err(|e| RunError::Usage(e.to_string()))?)
        }
    };
    emit(out, |w| {
        writeln!(w, "x,epsilon,estimate,alpha,probabilistic_bound,mertens")?;
        writeln!(
            w,
            "{},{},{},{},{},{}",
            fmt_g17(x),
            fmt_g17(choice.epsilon),
            fmt_g17(value),
            config.alpha.map(fmt_g17).unwrap_or_default(),
            prob.map(fmt_g17).unwrap_or_default(),
            mertens.map(|m| m.to_string()).unwrap_or_default()
        )?;
        w.flush()
    })?;
    Ok(true)
}

fn single_pv(mu: f64, e: f64, x: f64, tolerance: f64) -> Result<CheckReport, RunError> {
    use crate::quadrature::{pv_closed_form, pv_integral, PvSpec};
    use crate::report::params;
    let spec = PvSpec::new(mu, e, x).map_err(|e| RunError::Usage(e.to_string()))?;
    let quad = pv_integral(&spec, tolerance).map_err(failed)?;
    let closed = pv_closed_form(&spec);
    Ok(CheckReport::gated(
        format!("pv_closed_form/mu={mu}/eps={e}/x={x}"),
        params([
            ("mu", mu.into()),
            ("epsilon", e.into()),
            ("x", x.into()),
            ("quadrature", quad.value.into()),
            ("closed_form", closed.into()),
            ("est_error", quad.est_error.into()),
        ]),
        (quad.value - closed) / closed,
        suites::PV_RELATIVE_BOUND,
    ))
}

/// File names written by `report-all` inside the --out directory.
pub const REPORT_FILES: [&str; 4] = ["checks.csv", "sweep.csv", "traces.csv", "summary.txt"];

fn report_all(config: &RunConfig) -> Result<bool, RunError> {
    let Some(table_path) = &config.table_path else {
        return Err(RunError::Io("report-all needs an existing --table file".into()));
    };
    let table = load_table(table_path).map_err(|e| io_err(table_path, e))?;
    let dir = config.output_path.as_deref().expect("validated");
    fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;

    let mut reports = Vec::new();
    reports.extend(suites::pv_suite(config.tolerance).map_err(failed)?);
    reports.extend(suites::theorem1_suite(config.x.unwrap_or(suites::DEFAULT_SHIFT_X)).map_err(failed)?);
    reports.extend(suites::dn_suite(config.seed).map_err(failed)?);
    reports.extend(suites::pair_suite(config.tolerance).map_err(failed)?);
    reports.extend(suites::bounds_suite(&table, 1.0));

    let n_hi = suites::SWEEP_N_HI.min(table.limit().saturating_sub(1));
    let records = sweep_report(suites::SWEEP_N_LO, n_hi, config.theta, &table).map_err(failed)?;
    let traces: Vec<TraceRow> = suites::inverse_traces(&table, suites::DEFAULT_TRACE_X).map_err(failed)?;
    reports.extend(traces.iter().map(TraceRow::to_report));

    let mut summary = summarize(&reports);
    summary.push_str(&format!(
        "sweep: {} points, fraction with |M(x)| < estimate = {}\n",
        records.len(),
        fmt_g17(satisfied_fraction(&records))
    ));

    let paths: Vec<PathBuf> = REPORT_FILES.iter().map(|f| dir.join(f)).collect();
    let write = |p: &Path, f: &dyn Fn(&mut BufWriter<File>) -> io::Result<()>| -> Result<(), RunError> {
        let mut w = create(p)?;
        f(&mut w).map_err(|e| io_err(p, e))
    };
    write(&paths[0], &|w| write_check_csv(&reports, w))?;
    write(&paths[1], &|w| write_sweep_csv(&records, w))?;
    write(&paths[2], &|w| write_trace_csv(&traces, w))?;
    write(&paths[3], &|w| {
        w.write_all(summary.as_bytes())?;
        w.flush()
    })?;
    print!("{summary}");
    Ok(all_pass(&reports))
}
