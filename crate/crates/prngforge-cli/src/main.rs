//! Command-line front end.
//!
//! Data goes to stdout, diagnostics to stderr. Exit codes: 0 success,
//! 1 I/O or budget failure, 2 invalid flags, 3 battery failure.

use clap::{Args, Parser, Subcommand, ValueEnum};
use prngforge::bench::{self, BenchConfig};
use prngforge::param_gen::MultiplierTable;
use prngforge::rng_core::{to_uniform, GeneratorKind};
use prngforge::stats::{self, BatteryLevel, SampleSource};
use prngforge::streams::{generate_ensemble, EnsembleConfig, Scheme, StreamSink};
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

const EXIT_IO: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_BATTERY_FAIL: u8 = 3;

#[derive(Parser)]
#[command(
    name = "prngforge",
    version,
    about = "Parallel pseudo-random number generation toolkit",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate random values as parallel streams.
    Gen(GenArgs),
    /// Measure generation throughput and derived metrics.
    Bench(BenchArgs),
    /// Run the statistical quality battery.
    Test(TestArgs),
    /// Print the valid MWC multipliers.
    ListMultipliers(ListArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum RngArg {
    Mwc,
    /// Accepted as `xorshift` or `xorshift256`.
    #[value(name = "xorshift", alias = "xorshift256")]
    Xorshift,
    Kiss,
    Lcg,
    Shr3,
}

impl From<RngArg> for GeneratorKind {
    fn from(arg: RngArg) -> Self {
        match arg {
            RngArg::Mwc => GeneratorKind::Mwc,
            RngArg::Xorshift => GeneratorKind::Xorshift256,
            RngArg::Kiss => GeneratorKind::Kiss,
            RngArg::Lcg => GeneratorKind::Lcg,
            RngArg::Shr3 => GeneratorKind::Shr3,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SchemeArg {
    Param,
    Split,
    Leapfrog,
}

impl From<SchemeArg> for Scheme {
    fn from(arg: SchemeArg) -> Self {
        match arg {
            SchemeArg::Param => Scheme::Parameterize,
            SchemeArg::Split => Scheme::Split,
            SchemeArg::Leapfrog => Scheme::Leapfrog,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    /// Little-endian 4-byte words, stream-major.
    U32le,
    /// Eight lowercase hex digits per line.
    Hex,
    /// Decimal per line.
    Text,
    /// Uniform [0,1) values, decimal per line.
    F32text,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum YesNo {
    Yes,
    No,
}

impl From<YesNo> for bool {
    fn from(v: YesNo) -> bool {
        matches!(v, YesNo::Yes)
    }
}

#[derive(Args)]
struct GenArgs {
    /// Generator kind.
    #[arg(long = "rng", value_enum)]
    rng: RngArg,
    /// Number of parallel streams.
    #[arg(long, default_value_t = 1)]
    streams: u64,
    /// Values per stream.
    #[arg(long)]
    count: u64,
    /// Master seed for all stream derivation.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Stream parallelization scheme.
    #[arg(long, value_enum, default_value_t = SchemeArg::Param)]
    scheme: SchemeArg,
    /// Output format.
    #[arg(long, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,
    /// Output path (defaults to stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write final generator states to <out>.state.
    #[arg(long, default_value_t = false)]
    save_state: bool,
    /// Worker threads.
    #[arg(long, default_value_t = 1)]
    workers: usize,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long = "rng", value_enum)]
    rng: RngArg,
    /// Values per stream (n_t).
    #[arg(long = "n-per-stream", default_value_t = 250_000)]
    n_per_stream: u64,
    /// Stream count (N_t).
    #[arg(long, default_value_t = 64)]
    streams: u64,
    /// Store generated values, or keep only final states.
    #[arg(long, value_enum, default_value_t = YesNo::Yes)]
    writeback: YesNo,
    /// Also time the uniform-converted variant.
    #[arg(long, value_enum, default_value_t = YesNo::Yes)]
    uniform: YesNo,
    /// Worker threads.
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Timed passes; the median is reported.
    #[arg(long, default_value_t = 5)]
    repeats: usize,
    /// Emit the machine-readable row instead of the table.
    #[arg(long, default_value_t = false)]
    machine: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output buffer budget in bytes.
    #[arg(long = "budget-bytes", default_value_t = 1 << 30)]
    budget_bytes: u64,
}

#[derive(Args)]
struct TestArgs {
    /// Generator kind; `_counter` is a hidden sanity source.
    #[arg(long = "rng")]
    rng: String,
    /// Number of 32-bit samples to test.
    #[arg(long)]
    n: Option<usize>,
    /// Battery level.
    #[arg(long, value_enum, default_value_t = LevelArg::Quick)]
    level: LevelArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum LevelArg {
    Quick,
    Full,
}

impl From<LevelArg> for BatteryLevel {
    fn from(v: LevelArg) -> Self {
        match v {
            LevelArg::Quick => BatteryLevel::Quick,
            LevelArg::Full => BatteryLevel::Full,
        }
    }
}

#[derive(Args)]
struct ListArgs {
    /// MWC base width in bits.
    #[arg(long = "base-bits", default_value_t = 16)]
    base_bits: u32,
    /// Print only the number of multipliers.
    #[arg(long = "count-only", default_value_t = false)]
    count_only: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Gen(args) => cmd_gen(args),
        Command::Bench(args) => cmd_bench(args),
        Command::Test(args) => cmd_test(args),
        Command::ListMultipliers(args) => cmd_list_multipliers(args),
    }
}

fn usage_error(message: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {message}");
    ExitCode::from(EXIT_USAGE)
}

fn io_error(message: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {message}");
    ExitCode::from(EXIT_IO)
}

/// Writes each stream's block in the selected format.
struct FormatSink<W: Write> {
    writer: W,
    format: FormatArg,
}

impl<W: Write> StreamSink for FormatSink<W> {
    fn accept(&mut self, _stream_index: usize, values: &[u32]) -> io::Result<()> {
        match self.format {
            FormatArg::U32le => {
                for &v in values {
                    self.writer.write_all(&v.to_le_bytes())?;
                }
            }
            FormatArg::Hex => {
                for &v in values {
                    writeln!(self.writer, "{v:08x}")?;
                }
            }
            FormatArg::Text => {
                for &v in values {
                    writeln!(self.writer, "{v}")?;
                }
            }
            FormatArg::F32text => {
                for &v in values {
                    writeln!(self.writer, "{}", to_uniform(v))?;
                }
            }
        }
        Ok(())
    }
}

fn cmd_gen(args: GenArgs) -> ExitCode {
    if args.save_state && args.out.is_none() {
        return usage_error("--save-state requires --out (state goes to <out>.state)");
    }
    let cfg = EnsembleConfig {
        kind: args.rng.into(),
        stream_count: args.streams,
        per_stream_count: args.count,
        master_seed: args.seed,
        scheme: args.scheme.into(),
        worker_count: args.workers,
    };

    let run = |sink: &mut dyn StreamSink| generate_ensemble(&cfg, sink);
    let summary = match &args.out {
        Some(path) => {
            let file = match std::fs::File::create(path) {
                Ok(f) => f,
                Err(e) => return io_error(format_args!("cannot create {}: {e}", path.display())),
            };
            let mut sink = FormatSink {
                writer: BufWriter::new(file),
                format: args.format,
            };
            let summary = run(&mut sink);
            if summary.is_ok() {
                if let Err(e) = sink.writer.flush() {
                    return io_error(format_args!("write to {} failed: {e}", path.display()));
                }
            }
            summary
        }
        None => {
            let stdout = io::stdout();
            let mut sink = FormatSink {
                writer: BufWriter::new(stdout.lock()),
                format: args.format,
            };
            let summary = run(&mut sink);
            if summary.is_ok() {
                if let Err(e) = sink.writer.flush() {
                    return io_error(format_args!("write to stdout failed: {e}"));
                }
            }
            summary
        }
    };

    let summary = match summary {
        Ok(s) => s,
        Err(e @ prngforge::streams::EnsembleError::Sink { .. }) => return io_error(e),
        // Everything else is a bad flag combination (unsupported
        // scheme, zero counts, out-of-range stream counts).
        Err(e) => return usage_error(e),
    };

    if args.save_state {
        let mut os = args
            .out
            .as_ref()
            .expect("checked above")
            .as_os_str()
            .to_owned();
        os.push(".state");
        let path = PathBuf::from(os);
        let mut body = format!("prngforge-state v1 {}\n", cfg.kind);
        for state in &summary.final_states {
            for word in state.state_words() {
                body.push_str(&word.to_string());
                body.push('\n');
            }
        }
        if let Err(e) = std::fs::write(&path, body) {
            return io_error(format_args!("cannot write {}: {e}", path.display()));
        }
    }
    ExitCode::SUCCESS
}

fn cmd_bench(args: BenchArgs) -> ExitCode {
    let cfg = BenchConfig {
        kind: args.rng.into(),
        values_per_stream: args.n_per_stream,
        stream_count: args.streams,
        writeback: args.writeback.into(),
        uniform: args.uniform.into(),
        repeats: args.repeats,
        workers: args.workers,
        master_seed: args.seed,
        budget_bytes: args.budget_bytes,
    };
    let report = match bench::run_benchmark(&cfg) {
        Ok(r) => r,
        Err(e @ bench::BenchError::BudgetExceeded { .. }) => return io_error(e),
        Err(e @ bench::BenchError::ClockFailure) => return io_error(e),
        Err(e) => return usage_error(e),
    };
    if args.machine {
        println!("{}", bench::CSV_HEADER);
        println!("{}", bench::render_csv_row(&report));
    } else {
        print!("{}", bench::render_text(&report));
    }
    ExitCode::SUCCESS
}

fn cmd_test(args: TestArgs) -> ExitCode {
    let source = match args.rng.as_str() {
        "_counter" => SampleSource::Counter,
        "mwc" => SampleSource::Generator(GeneratorKind::Mwc),
        "xorshift" | "xorshift256" => SampleSource::Generator(GeneratorKind::Xorshift256),
        "kiss" => SampleSource::Generator(GeneratorKind::Kiss),
        "lcg" => SampleSource::Generator(GeneratorKind::Lcg),
        "shr3" => SampleSource::Generator(GeneratorKind::Shr3),
        other => {
            return usage_error(format_args!(
                "invalid value '{other}' for --rng (expected mwc, xorshift, kiss, lcg or shr3)"
            ))
        }
    };
    let level: BatteryLevel = args.level.into();
    let n = args.n.unwrap_or_else(|| level.min_samples());
    let report = match stats::run_battery(source, args.seed, n, level) {
        Ok(r) => r,
        // Undersized --n and bad parameters are flag errors.
        Err(e) => return usage_error(e),
    };
    print!("{}", report.render_text());
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_BATTERY_FAIL)
    }
}

fn cmd_list_multipliers(args: ListArgs) -> ExitCode {
    let table = match MultiplierTable::enumerate(args.base_bits) {
        Ok(t) => t,
        Err(e) => return usage_error(e),
    };
    if args.base_bits == 16 {
        // The classic default pair is never assumed valid; report what
        // the enumeration actually found.
        for a in [18000u32, 36969] {
            eprintln!(
                "multiplier {a}: {}",
                if table.contains(a) {
                    "present"
                } else {
                    "absent"
                }
            );
        }
    }
    if args.count_only {
        println!("{}", table.len());
    } else {
        print!("{}", table.to_fixture_string());
    }
    ExitCode::SUCCESS
}
