use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qwilson_core::arith::is_prime;
use qwilson_core::report::{self, CSV_HEADER};
use qwilson_core::theorems::{parse_targets, run_range_with, RunOptions};
use qwilson_core::{OutputFormat, ProductStrategy};

mod inspect;

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser, Debug)]
#[command(name = "qwilson", version, about = "Verify q-analogues of the Wilson, Mordell and Chowla congruences")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Verify the congruences for every prime in a range
    Verify(VerifyArgs),
    /// Print both sides of every congruence for one prime
    Inspect { p: u64 },
    /// Print class number and unit data for one prime
    Classnum { p: u64 },
}

#[derive(clap::Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    min: u64,
    #[arg(long)]
    max: u64,
    /// Comma list from: 1, 2, 3, 4, 4-stated, corollaries, proof-identities
    #[arg(long, default_value = "1,2,3,4,corollaries,proof-identities")]
    theorems: String,
    #[arg(long, value_enum, default_value_t = Format::Human)]
    format: Format,
    #[arg(long, env = "QWILSON_JOBS", default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    jobs: u64,
    /// Stop after the first prime with a failing check
    #[arg(long)]
    fail_fast: bool,
    /// Record per-check wall-clock times (makes output non-reproducible)
    #[arg(long)]
    timings: bool,
    /// Multiply q-integer factors with the O(p) window method
    #[arg(long)]
    fast_mul: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Human,
    Json,
    Csv,
}

impl From<Format> for OutputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Human => OutputFormat::Human,
            Format::Json => OutputFormat::Json,
            Format::Csv => OutputFormat::Csv,
        }
    }
}

fn usage_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(EXIT_USAGE)
}

fn verify(args: VerifyArgs) -> ExitCode {
    if args.min > args.max {
        return usage_error(format!("--min {} exceeds --max {}", args.min, args.max));
    }
    let targets = match parse_targets(&args.theorems) {
        Ok(t) if !t.is_empty() => t,
        Ok(_) => return usage_error("--theorems must name at least one check group"),
        Err(e) => return usage_error(e),
    };
    let options = RunOptions {
        targets,
        jobs: args.jobs as usize,
        fail_fast: args.fail_fast,
        strategy: if args.fast_mul {
            ProductStrategy::SlidingWindow
        } else {
            ProductStrategy::Schoolbook
        },
        record_timings: args.timings,
    };

    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let format = OutputFormat::from(args.format);
    let mut header_written = false;
    let mut any_failed = false;
    let mut io_error = None;
    let result = run_range_with(args.min, args.max, &options, |r| {
        any_failed |= r.has_failures();
        let written = match format {
            OutputFormat::Json => report::write_json(&mut out, &r),
            OutputFormat::Human => report::write_human(&mut out, &r),
            OutputFormat::Csv => {
                let header = !std::mem::replace(&mut header_written, true);
                csv_chunk(&r, header).and_then(|bytes| out.write_all(&bytes))
            }
        };
        if let Err(e) = written.and_then(|_| out.flush()) {
            io_error.get_or_insert(e);
        }
    });
    if let Err(e) = result {
        return usage_error(e);
    }
    if let Some(e) = io_error {
        eprintln!("error: writing output: {e}");
        return ExitCode::from(EXIT_FAIL);
    }
    if any_failed {
        ExitCode::from(EXIT_FAIL)
    } else {
        ExitCode::SUCCESS
    }
}

fn csv_chunk(r: &qwilson_core::VerificationReport, header: bool) -> io::Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    if header {
        w.write_record(CSV_HEADER)?;
    }
    report::write_csv_rows(&mut w, r)?;
    w.into_inner().map_err(|e| e.into_error())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Verify(args) => verify(args),
        Command::Inspect { p } => {
            if p < 5 || !is_prime(p) {
                return usage_error(format!("inspect needs a prime p >= 5, got {p}"));
            }
            inspect::inspect(p)
        }
        Command::Classnum { p } => {
            if p <= 3 || !is_prime(p) {
                return usage_error(format!("classnum needs a prime p > 3, got {p}"));
            }
            inspect::classnum(p)
        }
    }
}
