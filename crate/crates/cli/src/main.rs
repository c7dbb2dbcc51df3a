//! `ramsey`: search, check and analyse multiplicative-coset Ramsey algebras.
//!
//! Exit codes: 0 success / positive answer, 1 legitimate negative answer,
//! 2 usage error, 3 I/O error.

mod cache;
mod output;

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ramsey_cosets::bounds::bounds_for;
use ramsey_cosets::checker::{fast_check, naive_check};
use ramsey_cosets::fourier::scan_uniformity;
use ramsey_cosets::search::{compare_with_oeis, parse_bfile, search_range, verify_nonexistence, CapPolicy};
use ramsey_cosets::{CosetDecomposition, SearchRecord};

use output::{Format, OutputRecord, Value};

#[derive(Parser)]
#[command(name = "ramsey", version, about = "Multiplicative-coset Ramsey algebra search over Z/pZ")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether the cosets of the index-m subgroup mod p form a Ramsey algebra.
    Check {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        p: u64,
        /// Primitive root to build the cosets from (default: smallest).
        #[arg(long)]
        g: Option<u64>,
        /// Use the literal pairwise sumset check instead of the fast one.
        #[arg(long)]
        naive: bool,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Smallest modulus for each colour count in a range.
    Search {
        #[command(flatten)]
        sweep: SweepArgs,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Compare against a b-file given with --oeis.
        #[arg(long, requires = "oeis")]
        compare: bool,
        #[arg(long)]
        oeis: Option<PathBuf>,
    },
    /// Check every candidate prime up to m^4 + 5 and report whether any passes.
    VerifyNone {
        #[arg(long)]
        m: u64,
        /// Per-prime outcome table (CSV).
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Fourier uniformity profile of X_0 for each candidate prime in a range.
    Fourier {
        #[arg(long)]
        m: u64,
        #[arg(long, value_parser = parse_range)]
        range: (u64, u64),
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search window and Ramsey-number cap.
    Bounds {
        #[arg(long, value_parser = parse_range)]
        m: (u64, u64),
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// CSV data behind the plots.
    Plotdata {
        #[command(subcommand)]
        kind: PlotKind,
    },
}

#[derive(Args, Clone)]
struct SweepArgs {
    /// Colour counts, `a..b` inclusive or a single value.
    #[arg(long, value_parser = parse_range)]
    m: (u64, u64),
    /// Lower the per-m cap below m^4 + 5 (never raises it).
    #[arg(long)]
    cap: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Report elapsed time as 0 so output is byte-identical across runs.
    #[arg(long)]
    stable_output: bool,
}

#[derive(Subcommand)]
enum PlotKind {
    /// m, smallest_p
    Fig1 {
        #[command(flatten)]
        sweep: SweepArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// m, smallest_p, lower, upper
    Fig2 {
        #[command(flatten)]
        sweep: SweepArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Same columns as `fourier`.
    Fig3 {
        #[arg(long)]
        m: u64,
        #[arg(long, value_parser = parse_range)]
        range: (u64, u64),
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_range(s: &str) -> Result<(u64, u64), String> {
    let parse = |t: &str| t.trim().parse::<u64>().map_err(|e| format!("{t:?}: {e}"));
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (parse(a)?, parse(b)?),
        None => {
            let v = parse(s)?;
            (v, v)
        }
    };
    if lo > hi {
        return Err(format!("empty range {lo}..{hi}"));
    }
    Ok((lo, hi))
}

enum CliError {
    Usage(String),
    Io(String),
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

type CliResult = Result<ExitCode, CliError>;

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn run_sweep(sweep: &SweepArgs) -> Result<Vec<SearchRecord>, CliError> {
    let (lo, hi) = sweep.m;
    if let Some(cap) = sweep.cap {
        let upper = bounds_for(lo.max(1)).upper;
        if cap > upper {
            eprintln!("note: --cap {cap} exceeds m^4 + 5 for some m; using m^4 + 5 there");
        }
    }
    let policy = sweep.cap.map_or(CapPolicy::UpperBound, CapPolicy::AtMost);
    let records = search_range(lo, hi, policy, sweep.jobs).map_err(|e| CliError::Usage(e.to_string()))?;
    for r in records.iter().filter(|r| r.two_point_special_case) {
        eprintln!(
            "note: m = {} answered on the two-point base set (p = {}) by the relational check",
            r.m, r.smallest_p
        );
    }
    Ok(records)
}

fn cmd_check(m: u64, p: u64, g: Option<u64>, naive: bool, format: Format) -> CliResult {
    let dec = match g {
        Some(g) => CosetDecomposition::new(p, m, g),
        None => cache::load_or_build(p, m),
    }
    .map_err(|e| CliError::Usage(e.to_string()))?;
    let (method, outcome) = if naive {
        ("naive", naive_check(&dec))
    } else {
        ("fast", fast_check(&dec))
    };
    let rec = output::check_record(p, m, dec.generator(), method, &outcome);
    emit(&output::render(&[rec], format, ""), None)?;
    Ok(if outcome.verdict() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn cmd_search(
    sweep: &SweepArgs,
    format: Format,
    out: Option<&PathBuf>,
    oeis: Option<&PathBuf>,
) -> CliResult {
    // read the b-file first so a bad path fails before the sweep
    let table = match oeis {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            Some(parse_bfile(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?)
        }
        None => None,
    };
    let records = run_sweep(sweep)?;
    let rows: Vec<OutputRecord> = records
        .iter()
        .map(|r| output::search_record(r, sweep.stable_output))
        .collect();
    emit(&output::render(&rows, format, output::SEARCH_HEADER), out)?;
    if let Some(table) = table {
        let diffs = compare_with_oeis(&records, &table);
        for d in &diffs {
            eprintln!("mismatch: m = {} computed {} published {}", d.m, d.computed, d.published);
        }
        let compared = records.iter().filter(|r| table.get(r.m).is_some()).count();
        eprintln!("compared {compared} entries, {} mismatches", diffs.len());
        if !diffs.is_empty() {
            return Ok(ExitCode::from(1));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify_none(m: u64, report: Option<&PathBuf>) -> CliResult {
    if m < 2 {
        return Err(CliError::Usage("verify-none needs m >= 2".into()));
    }
    let outcomes = verify_nonexistence(m).map_err(|e| CliError::Usage(e.to_string()))?;
    if let Some(path) = report {
        let rows: Vec<OutputRecord> = outcomes
            .iter()
            .map(|(p, o)| {
                OutputRecord::default()
                    .with("p", Value::UInt((*p).into()))
                    .with("verdict", Value::Bool(o.verdict()))
                    .with("witness", o.witness().map_or(Value::Null, |w| Value::Text(w.to_string())))
            })
            .collect();
        emit(&output::render(&rows, Format::Csv, "p,verdict,witness"), Some(path))?;
    }
    let passing: Vec<u64> = outcomes.iter().filter(|(_, o)| o.verdict()).map(|(p, _)| *p).collect();
    let upper = bounds_for(m).upper;
    match passing.first() {
        None => {
            println!(
                "m = {m}: none of the {} primes p = 1 (mod {}) up to {upper} passes",
                outcomes.len(),
                2 * m
            );
            Ok(ExitCode::SUCCESS)
        }
        Some(p) => {
            println!("{p}");
            eprintln!("m = {m}: {} of {} candidate primes pass", passing.len(), outcomes.len());
            Ok(ExitCode::from(1))
        }
    }
}

fn cmd_fourier(m: u64, (lo, hi): (u64, u64), out: Option<&PathBuf>) -> CliResult {
    if m == 0 {
        return Err(CliError::Usage("m must be positive".into()));
    }
    let rows: Vec<OutputRecord> = scan_uniformity::<f64>(m, lo, hi)
        .iter()
        .map(output::fourier_record)
        .collect();
    emit(&output::render(&rows, Format::Csv, output::FOURIER_HEADER), out)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_bounds((lo, hi): (u64, u64), format: Format) -> CliResult {
    if lo == 0 {
        return Err(CliError::Usage("m must be positive".into()));
    }
    let rows: Vec<OutputRecord> = (lo..=hi)
        .map(|m| output::bounds_record(&bounds_for(m), format == Format::Json))
        .collect();
    emit(&output::render(&rows, format, ""), None)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_plot(kind: &PlotKind) -> CliResult {
    match kind {
        PlotKind::Fig1 { sweep, out } | PlotKind::Fig2 { sweep, out } => {
            let with_bounds = matches!(kind, PlotKind::Fig2 { .. });
            let rows: Vec<OutputRecord> = run_sweep(sweep)?
                .iter()
                .map(|r| {
                    let rec = OutputRecord::default()
                        .with("m", Value::UInt(r.m.into()))
                        .with("smallest_p", Value::UInt(r.smallest_p.into()));
                    if with_bounds {
                        let b = bounds_for(r.m);
                        rec.with("lower", Value::UInt(b.lower.into()))
                            .with("upper", Value::UInt(b.upper.into()))
                    } else {
                        rec
                    }
                })
                .collect();
            let header = if with_bounds { "m,smallest_p,lower,upper" } else { "m,smallest_p" };
            emit(&output::render(&rows, Format::Csv, header), out.as_ref())?;
            Ok(ExitCode::SUCCESS)
        }
        PlotKind::Fig3 { m, range, out } => cmd_fourier(*m, *range, out.as_ref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Check { m, p, g, naive, format } => cmd_check(*m, *p, *g, *naive, *format),
        Command::Search { sweep, format, out, compare: _, oeis } => {
            cmd_search(sweep, *format, out.as_ref(), oeis.as_ref())
        }
        Command::VerifyNone { m, report } => cmd_verify_none(*m, report.as_ref()),
        Command::Fourier { m, range, out } => cmd_fourier(*m, *range, out.as_ref()),
        Command::Bounds { m, format } => cmd_bounds(*m, *format),
        Command::Plotdata { kind } => cmd_plot(kind),
    };
    match result {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
