//! Command-line front end for signed Engel expansions.
//!
//! Exit codes: 0 success (and `verify` all-Pass), 1 verification Fail,
//! 2 usage error, 3 certified precision exhausted before the requested
//! digit count.

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;
use signed_engel::expansion::StopReason;
use signed_engel::markov::{simulate, ChainSource};
use signed_engel::stats::{run_suite, PhiFunction, VerificationReport, SUITES};
use signed_engel::{
    basic_interval, expand_certified, expand_rational, reconstruct, to_decimal_string, Ball,
    Rational, SignedEngelExpansion, SymbolSequence, Variant,
};
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_PRECISION: u8 = 3;

#[derive(Parser)]
#[command(name = "signed-engel", version, about = "Signed Engel expansions: exact expansion, admissibility, cylinder intervals, chain simulation and verification", long_about = None)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Expand a rational "p/q" or a decimal "0.dddd" (decimals are expanded
    /// with certified digits only)
    Expand(ExpandArgs),
    /// Rebuild the exact value from digits and cumulative signs
    Reconstruct(ReconstructArgs),
    /// Check a digit/sign word for admissibility
    Admissible(AdmissibleArgs),
    /// Cylinder interval of a digit/sign word
    Interval(IntervalArgs),
    /// Simulate digit-chain trajectories to CSV
    Simulate(SimulateArgs),
    /// Run a verification suite and emit its report JSON
    Verify(VerifyArgs),
}

#[derive(Args)]
struct ExpandArgs {
    /// Input value: "p/q" or a plain decimal in (0, 1)
    #[arg(long)]
    input: String,
    /// Maximum digits to emit (default: 64 for rationals, 256 for decimals)
    #[arg(long)]
    max_digits: Option<usize>,
    /// Extra radius slack 2^-E for decimal inputs (stress testing; 0 = none)
    #[arg(long, default_value_t = 0)]
    extra_radius_log2: u32,
    /// Write the JSON here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReconstructArgs {
    /// Comma-separated digits, e.g. "2,5"
    #[arg(long)]
    digits: String,
    /// Comma-separated cumulative signs, e.g. "+,-" (the first must be +)
    #[arg(long)]
    signs: String,
    /// Partial-sum length (default: all digits)
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AdmissibleArgs {
    /// Interleaved word, e.g. "2 +1 4"
    #[arg(long)]
    sequence: String,
    /// "n" for the standard space, "prime" to require an even final digit
    #[arg(long, default_value = "n")]
    variant: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct IntervalArgs {
    /// Interleaved word, e.g. "2 -1 4" (final digit must be even)
    #[arg(long)]
    sequence: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    /// Chain to simulate: "exact" or "surrogate"
    #[arg(long)]
    chain: String,
    /// Trajectory length
    #[arg(long)]
    n: usize,
    /// Number of trajectories
    #[arg(long)]
    count: u64,
    /// Master seed
    #[arg(long)]
    seed: u64,
    /// Write CSV here (batch metadata JSON then goes to stdout)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// One of lln|clt|lil|bb|ratio|yn|pmf|all
    #[arg(long)]
    suite: String,
    #[arg(long)]
    seed: u64,
    /// Extra growth function for the bb suite, e.g. "nlogpow:3", "power:1",
    /// "const:5", "table:conv:10,100"
    #[arg(long)]
    phi: Option<String>,
    /// Also write the raw per-trajectory statistics as CSV for plotting
    #[arg(long)]
    raw: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    // Bounding the worker count must not change any output; it only throttles.
    if let Ok(threads) = std::env::var("SIGNED_ENGEL_THREADS") {
        match threads.parse::<usize>() {
            Ok(t) if t >= 1 => {
                rayon::ThreadPoolBuilder::new()
                    .num_threads(t)
                    .build_global()
                    .expect("rayon pool is configured before first use");
            }
            _ => {
                eprintln!("error: SIGNED_ENGEL_THREADS must be a positive integer");
                return ExitCode::from(EXIT_USAGE);
            }
        }
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn writer(out: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).with_context(|| format!("cannot create {}", path.display()))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

fn emit_json(out: &Option<PathBuf>, value: &impl serde::Serialize) -> Result<()> {
    let mut w = writer(out)?;
    serde_json::to_writer(&mut w, value)?;
    writeln!(w)?;
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Expand(args) => cmd_expand(args),
        Command::Reconstruct(args) => cmd_reconstruct(args),
        Command::Admissible(args) => cmd_admissible(args),
        Command::Interval(args) => cmd_interval(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Verify(args) => cmd_verify(args),
    }
}

fn cmd_expand(args: ExpandArgs) -> Result<ExitCode> {
    if args.input.contains('.') {
        let max_digits = args.max_digits.unwrap_or(256);
        let ball = Ball::from_decimal(&args.input, args.extra_radius_log2)?;
        let certified = expand_certified(&ball, max_digits)?;
        emit_json(&args.out, &certified.expansion)?;
        if certified.stop == StopReason::Straddle {
            eprintln!(
                "precision exhausted after {} certified digits (requested {max_digits})",
                certified.expansion.certified_prefix_len()
            );
            return Ok(ExitCode::from(EXIT_PRECISION));
        }
        Ok(ExitCode::SUCCESS)
    } else {
        let max_digits = args.max_digits.unwrap_or(64);
        let x = signed_engel::parse_rational(&args.input)?;
        let expansion = expand_rational(&x, max_digits)?;
        emit_json(&args.out, &expansion)?;
        Ok(ExitCode::SUCCESS)
    }
}

fn cmd_reconstruct(args: ReconstructArgs) -> Result<ExitCode> {
    let digits: Vec<BigUint> = args
        .digits
        .split(',')
        .map(|t| BigUint::from_str(t.trim()).with_context(|| format!("bad digit {t:?}")))
        .collect::<Result<_>>()?;
    let signs: Vec<i8> = args
        .signs
        .split(',')
        .map(|t| match t.trim() {
            "+" | "+1" | "1" => Ok(1),
            "-" | "-1" => Ok(-1),
            other => bail!("bad sign {other:?} (use + or -)"),
        })
        .collect::<Result<_>>()?;
    let expansion = SignedEngelExpansion::from_parts(digits, signs, true)?;
    let n = args.n.unwrap_or(expansion.len());
    let value: Rational = reconstruct(&expansion, n)?;
    emit_json(
        &args.out,
        &serde_json::json!({
            "fraction": value.to_string(),
            "decimal": to_decimal_string(&value, 30),
        }),
    )?;
    Ok(ExitCode::SUCCESS)
}

fn parse_variant(text: &str) -> Result<Variant> {
    match text {
        "n" | "standard" => Ok(Variant::Standard),
        "prime" | "even-final" => Ok(Variant::EvenFinal),
        other => bail!("unknown variant {other:?} (use n|prime)"),
    }
}

fn cmd_admissible(args: AdmissibleArgs) -> Result<ExitCode> {
    let word: SymbolSequence = args.sequence.parse()?;
    let verdict = word.check_admissible(parse_variant(&args.variant)?);
    emit_json(
        &args.out,
        &serde_json::json!({
            "sequence": word.to_string(),
            "valid": verdict.is_valid(),
            "reason": verdict.reason(),
        }),
    )?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_interval(args: IntervalArgs) -> Result<ExitCode> {
    let word: SymbolSequence = args.sequence.parse()?;
    let interval = basic_interval(&word)?;
    emit_json(&args.out, &interval)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_simulate(args: SimulateArgs) -> Result<ExitCode> {
    let source = ChainSource::from_str(&args.chain).map_err(|e| anyhow::anyhow!(e))?;
    if args.n < 1 || args.count < 1 {
        bail!("need n >= 1 and count >= 1");
    }
    let batch = simulate(source, args.n, args.count, args.seed);
    match &args.out {
        Some(path) => {
            let file = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
            batch.write_csv(BufWriter::new(file))?;
            let mut stdout = io::stdout().lock();
            serde_json::to_writer(&mut stdout, &batch.metadata_json())?;
            writeln!(stdout)?;
        }
        None => {
            batch.write_csv(io::stdout().lock())?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode> {
    let phi = args.phi.as_deref().map(PhiFunction::parse).transpose()?;
    let suites: Vec<&str> = if args.suite == "all" {
        SUITES.to_vec()
    } else if SUITES.contains(&args.suite.as_str()) {
        vec![args.suite.as_str()]
    } else {
        bail!("unknown suite {:?} (use {}|all)", args.suite, SUITES.join("|"));
    };
    let mut reports: Vec<VerificationReport> = Vec::new();
    for name in suites {
        reports.extend(run_suite(name, args.seed, phi.as_ref())?);
    }
    if let Some(path) = &args.raw {
        let mut w = BufWriter::new(
            File::create(path).with_context(|| format!("cannot create {}", path.display()))?,
        );
        writeln!(w, "{}", signed_engel::stats::RAW_CSV_HEADER)?;
        for report in &reports {
            report.write_raw_csv(&mut w)?;
        }
    }
    let all_pass = reports.iter().all(|r| r.passed());
    emit_json(
        &args.out,
        &serde_json::json!({
            "master_seed": args.seed,
            "verdict": if all_pass { "Pass" } else { "Fail" },
            "reports": reports,
        }),
    )?;
    Ok(if all_pass { ExitCode::SUCCESS } else { ExitCode::from(EXIT_FAIL) })
}
