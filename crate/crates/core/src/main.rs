//! Command-line frontend: minimize coalgebras, generate inputs, check
//! partitions for stability.
//!
//! Exit codes: 0 success, 1 usage/parse/unstable-partition, 2 internal
//! invariant violation, 3 arithmetic overflow.

use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use coalgmin::error::{BuildError, FormatError, SigError};
use coalgmin::gen::{gen_chain_ts, gen_cycle_dfa, gen_prob_ladder, gen_wta, WtaSpec};
use coalgmin::io::{parse_aut, parse_coalg_text, parse_partition, write_coalg_text, write_partition};
use coalgmin::minimize::{
    ceil_log2, check_stable, mark_dirty_bound, minimize, naive_minimize, quotient, sig_call_bound,
};
use coalgmin::table::CoalgebraTable;
use coalgmin::MonoidKind;

#[derive(Parser)]
#[command(name = "coalgmin", version, about = "Behavioural equivalence for coalgebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the coarsest behavioural equivalence of a coalgebra.
    Minimize(MinimizeArgs),
    /// Generate a coalgebra file.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Check a partition file for stability against a coalgebra.
    Check(CheckArgs),
}

#[derive(Args)]
struct MinimizeArgs {
    /// Input file; '-' reads the textual format from standard input.
    #[arg(long)]
    input: String,
    /// Input format; inferred from the file extension when omitted.
    #[arg(long, value_enum)]
    format: Option<InputFormat>,
    #[arg(long, value_enum, default_value_t = Algorithm::Optimized)]
    algorithm: Algorithm,
    /// Write the resulting partition to this file.
    #[arg(long)]
    partition_out: Option<PathBuf>,
    /// Write the quotient coalgebra (textual format) to this file.
    #[arg(long)]
    quotient_out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = StatsFormat::Text)]
    stats: StatsFormat,
    /// Fail unless the complexity counters respect their guaranteed bounds
    /// (optimized algorithm only).
    #[arg(long)]
    assert_bounds: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum InputFormat {
    Aut,
    Coalg,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Algorithm {
    Optimized,
    Naive,
}

#[derive(Clone, Copy, ValueEnum)]
enum StatsFormat {
    Json,
    Text,
}

#[derive(Subcommand)]
enum GenCommand {
    /// Random weighted tree automaton over M * M^(4 * X^r).
    Wta {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[arg(long, value_parser = parse_monoid)]
        monoid: MonoidKind,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Deterministic automaton forming one long cycle.
    Cycle {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Transition system forming one chain into a deadlock.
    Chain {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Rational-weighted ladder with marked endpoints (n even).
    Ladder {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long)]
    input: String,
    #[arg(long)]
    partition: PathBuf,
    #[arg(long, value_enum)]
    format: Option<InputFormat>,
}

fn parse_monoid(s: &str) -> Result<MonoidKind, String> {
    MonoidKind::from_name(s).ok_or_else(|| {
        "expected one of bool-or, nat-add, int-add, word64-or, rational-add".to_string()
    })
}

#[derive(Serialize)]
struct RunStats {
    n: usize,
    m: u64,
    block_count: usize,
    sig_calls: u64,
    mark_dirty_calls: u64,
    max_block_moves: u32,
    iterations: u64,
    wall_time_ms: u64,
    peak_mem_bytes: u64,
}

struct CliError {
    message: String,
    code: u8,
}

impl CliError {
    fn usage(message: impl Into<String>) -> CliError {
        CliError {
            message: message.into(),
            code: 1,
        }
    }
}

impl From<FormatError> for CliError {
    fn from(e: FormatError) -> CliError {
        let code = match &e {
            FormatError::Build(BuildError::Arithmetic {
                source: SigError::Overflow,
                ..
            }) => 3,
            _ => 1,
        };
        CliError {
            message: e.to_string(),
            code,
        }
    }
}

impl From<SigError> for CliError {
    fn from(e: SigError) -> CliError {
        CliError {
            message: e.to_string(),
            code: if e == SigError::Overflow { 3 } else { 1 },
        }
    }
}

impl From<BuildError> for CliError {
    fn from(e: BuildError) -> CliError {
        CliError::from(FormatError::Build(e))
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> CliError {
        CliError::usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = std::panic::catch_unwind(|| run(cli));
    match outcome {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(e)) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
        // the panic message has already been printed by the default hook
        Err(_) => {
            eprintln!("error: internal invariant violation");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Minimize(args) => cmd_minimize(args),
        Command::Gen(args) => cmd_gen(args),
        Command::Check(args) => cmd_check(args),
    }
}

fn read_input(input: &str, format: Option<InputFormat>) -> Result<CoalgebraTable, CliError> {
    let (text, is_aut) = if input == "-" {
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf)?;
        (buf, false)
    } else {
        let path = Path::new(input);
        let is_aut = path.extension().is_some_and(|e| e == "aut");
        (fs::read_to_string(path)?, is_aut)
    };
    let use_aut = match format {
        Some(InputFormat::Aut) => true,
        Some(InputFormat::Coalg) => false,
        None => is_aut,
    };
    Ok(if use_aut {
        parse_aut(&text)?
    } else {
        parse_coalg_text(&text)?
    })
}

fn peak_mem_bytes() -> Option<u64> {
    let status = fs::read_to_string("/proc/self/status").ok()?;
    let line = status.lines().find(|l| l.starts_with("VmHWM:"))?;
    let kb: u64 = line.split_whitespace().nth(1)?.parse().ok()?;
    Some(kb * 1024)
}

fn cmd_minimize(args: MinimizeArgs) -> Result<(), CliError> {
    if args.assert_bounds && args.algorithm == Algorithm::Naive {
        return Err(CliError::usage(
            "--assert-bounds only applies to the optimized algorithm",
        ));
    }
    let table = read_input(&args.input, args.format)?;
    let start = Instant::now();
    let result = match args.algorithm {
        Algorithm::Optimized => minimize(&table)?,
        Algorithm::Naive => naive_minimize(&table)?,
    };
    let wall_time_ms = start.elapsed().as_millis() as u64;

    // buffer all outputs before writing anything, so a failure in a later
    // stage leaves no partial files behind
    let partition_text = args.partition_out.as_ref().map(|_| write_partition(&result));
    let quotient_text = match &args.quotient_out {
        Some(_) => Some(write_coalg_text(&quotient(&table, &result)?)),
        None => None,
    };

    if args.assert_bounds {
        let s = &result.stats;
        if s.sig_calls > sig_call_bound(table.n, table.m) {
            return Err(CliError {
                message: format!(
                    "sig_calls {} exceeds bound {}",
                    s.sig_calls,
                    sig_call_bound(table.n, table.m)
                ),
                code: 2,
            });
        }
        if s.mark_dirty_calls > mark_dirty_bound(table.n, table.m) {
            return Err(CliError {
                message: format!(
                    "mark_dirty_calls {} exceeds bound {}",
                    s.mark_dirty_calls,
                    mark_dirty_bound(table.n, table.m)
                ),
                code: 2,
            });
        }
        if s.max_block_moves > ceil_log2(table.n) {
            return Err(CliError {
                message: format!(
                    "max_block_moves {} exceeds bound {}",
                    s.max_block_moves,
                    ceil_log2(table.n)
                ),
                code: 2,
            });
        }
    }

    if let (Some(path), Some(text)) = (&args.partition_out, &partition_text) {
        fs::write(path, text)?;
    }
    if let (Some(path), Some(text)) = (&args.quotient_out, &quotient_text) {
        fs::write(path, text)?;
    }

    let peak = peak_mem_bytes().unwrap_or_else(|| {
        eprintln!("warning: peak memory not available on this platform");
        0
    });
    let stats = RunStats {
        n: table.n,
        m: table.m,
        block_count: result.block_count,
        sig_calls: result.stats.sig_calls,
        mark_dirty_calls: result.stats.mark_dirty_calls,
        max_block_moves: result.stats.max_block_moves,
        iterations: result.stats.iterations,
        wall_time_ms,
        peak_mem_bytes: peak,
    };
    match args.stats {
        StatsFormat::Json => {
            println!("{}", serde_json::to_string(&stats).expect("stats serialize"))
        }
        StatsFormat::Text => {
            println!("states           {}", stats.n);
            println!("edges            {}", stats.m);
            println!("blocks           {}", stats.block_count);
            println!("sig calls        {}", stats.sig_calls);
            println!("mark-dirty calls {}", stats.mark_dirty_calls);
            println!("max block moves  {}", stats.max_block_moves);
            println!("iterations       {}", stats.iterations);
            println!("wall time (ms)   {}", stats.wall_time_ms);
            println!("peak mem (bytes) {}", stats.peak_mem_bytes);
        }
    }
    Ok(())
}

fn cmd_gen(cmd: GenCommand) -> Result<(), CliError> {
    let (table, out) = match cmd {
        GenCommand::Wta { n, r, monoid, k, seed, out } => {
            if n == 0 || r == 0 || k == 0 {
                return Err(CliError::usage("wta needs n, r and k all positive"));
            }
            (gen_wta(WtaSpec { n, r, monoid, k, seed }), out)
        }
        GenCommand::Cycle { n, out } => {
            if n == 0 {
                return Err(CliError::usage("cycle needs n >= 1"));
            }
            (gen_cycle_dfa(n), out)
        }
        GenCommand::Chain { n, out } => {
            if n == 0 {
                return Err(CliError::usage("chain needs n >= 1"));
            }
            (gen_chain_ts(n), out)
        }
        GenCommand::Ladder { n, out } => {
            if n < 4 || n % 2 != 0 {
                return Err(CliError::usage("ladder needs an even n >= 4"));
            }
            (gen_prob_ladder(n), out)
        }
    };
    fs::write(out, write_coalg_text(&table))?;
    Ok(())
}

fn cmd_check(args: CheckArgs) -> Result<(), CliError> {
    let table = read_input(&args.input, args.format)?;
    let partition = parse_partition(&fs::read_to_string(&args.partition)?)?;
    if partition.assignment.len() != table.n {
        return Err(CliError::usage(format!(
            "partition lists {} states, coalgebra has {}",
            partition.assignment.len(),
            table.n
        )));
    }
    match check_stable(&table, &partition.assignment)? {
        None => {
            println!("stable");
            Ok(())
        }
        Some((a, b)) => Err(CliError::usage(format!(
            "partition is not stable: states {a} and {b} share a block but differ"
        ))),
    }
}
