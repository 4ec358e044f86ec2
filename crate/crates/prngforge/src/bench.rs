//! Throughput harness.
//!
//! Times parameterized-stream generation and derives three metrics from
//! the measured wall time `t`:
//!
//! ```text
//! BW    = n_t * N_t * 4     / (t * 10^9)   GBps   (writeback only)
//! U_ops = n_t * N_t * n_ops / (t * 10^9)   GOps
//! rate  = n_t * N_t         / (t * 10^9)   GSamples/s
//! ```
//!
//! where `n_t` is values per stream, `N_t` the stream count, and
//! `n_ops` the per-output word-operation count of the generator kind.
//! In writeback mode every value is stored to a pre-allocated buffer;
//! in no-writeback mode values are consumed in-register and only the
//! final generator states survive, which is what keeps the loop from
//! being elided. Output buffers are allocated outside the timed region
//! and result copy-out is never timed.

use crate::rng_core::{to_uniform, GeneratorKind};
use crate::streams::{self, EnsembleConfig, EnsembleError, Scheme};
use rayon::prelude::*;
use std::time::Instant;
use thiserror::Error;

/// Word operations needed per 32-bit output, address math and loop
/// overhead excluded.
///
/// The combined MWC costs 10 (3 shifts, 2 ands, 2 mults, 3 adds) and
/// the eight-word xorshift 18 (11 xors, 7 shifts). The kiss entry is
/// the fused-kernel count of 18, which is what its throughput is
/// reported against even though the sum of its parts (10 + 6 + 2 plus
/// the two combining ops) comes to 20. The lcg (2) and shr3 (6)
/// entries follow the same counting convention.
pub fn op_count(kind: GeneratorKind) -> u32 {
    match kind {
        GeneratorKind::Mwc => 10,
        GeneratorKind::Xorshift256 => 18,
        GeneratorKind::Kiss => 18,
        GeneratorKind::Lcg => 2,
        GeneratorKind::Shr3 => 6,
    }
}

/// Footer note attached to text reports.
pub const OP_TABLE_NOTE: &str = "op counts per output (word ops in the recurrence, address math \
     and loop overhead excluded): mwc=10 xorshift256=18 kiss=18 lcg=2 shr3=6";

#[derive(Debug, Error)]
pub enum BenchError {
    #[error(
        "output buffer of {needed} bytes exceeds the budget of {budget} bytes \
         (reduce streams or values per stream)"
    )]
    BudgetExceeded { needed: u64, budget: u64 },
    #[error("repeats must be at least 1")]
    NoRepeats,
    #[error("timed region completed in zero clock ticks; the monotonic clock is unusable here")]
    ClockFailure,
    #[error(transparent)]
    Ensemble(#[from] EnsembleError),
    #[error("malformed report row: {0}")]
    MalformedRow(String),
}

/// Benchmark parameters.
#[derive(Debug, Clone, Copy)]
pub struct BenchConfig {
    pub kind: GeneratorKind,
    /// n_t: values generated per stream.
    pub values_per_stream: u64,
    /// N_t: number of parameterized streams.
    pub stream_count: u64,
    pub writeback: bool,
    /// Also time the uniform-converted variant.
    pub uniform: bool,
    pub repeats: usize,
    pub workers: usize,
    pub master_seed: u64,
    /// Cap on the writeback buffer, in bytes.
    pub budget_bytes: u64,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            kind: GeneratorKind::Mwc,
            values_per_stream: 250_000,
            stream_count: 64,
            writeback: true,
            uniform: true,
            repeats: 5,
            workers: 1,
            master_seed: 0,
            budget_bytes: 1 << 30,
        }
    }
}

/// One benchmark result; the metric fields satisfy the formulas above
/// exactly because they are computed from `(n_t, N_t, t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub kind: GeneratorKind,
    pub writeback: bool,
    pub workers: usize,
    pub values_per_stream: u64,
    pub stream_count: u64,
    /// Median wall time of the integer-generation loop, seconds.
    pub t_seconds: f64,
    /// Absent in no-writeback mode (nothing is stored).
    pub bw_gbps: Option<f64>,
    pub uops_gops: f64,
    pub rate_gsps: f64,
    /// Absent when the uniform variant was not requested.
    pub uniform_rate_gsps: Option<f64>,
    /// Fold of the final generator states; differs when the seed
    /// differs, which proves the timed loop did its work.
    pub state_digest: u64,
}

/// Run the benchmark: `repeats` timed passes of the integer loop (and
/// of the uniform loop when requested), reporting the median. One
/// untimed warm-up pass precedes each timed series so page faults on
/// the fresh buffers never land inside the measurement.
pub fn run_benchmark(cfg: &BenchConfig) -> Result<BenchReport, BenchError> {
    if cfg.repeats == 0 {
        return Err(BenchError::NoRepeats);
    }
    let total = cfg.values_per_stream * cfg.stream_count;
    let needed = total * 4;
    if needed > cfg.budget_bytes {
        return Err(BenchError::BudgetExceeded {
            needed,
            budget: cfg.budget_bytes,
        });
    }

    let ensemble = EnsembleConfig {
        kind: cfg.kind,
        stream_count: cfg.stream_count,
        per_stream_count: cfg.values_per_stream,
        master_seed: cfg.master_seed,
        scheme: Scheme::Parameterize,
        worker_count: cfg.workers,
    };
    let initial = streams::parameterize_streams(&ensemble)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| EnsembleError::Pool(e.to_string()))?;

    let per_stream = cfg.values_per_stream as usize;
    // Buffers live across repeats; allocation is never timed.
    let mut int_buffer = if cfg.writeback {
        vec![0u32; total as usize]
    } else {
        Vec::new()
    };
    let mut uni_buffer = if cfg.writeback && cfg.uniform {
        vec![0f32; total as usize]
    } else {
        Vec::new()
    };

    // No-writeback discards the values; the final states alone keep
    // the loop alive, exactly like writing only the state vector back
    // at the end of the kernel.
    let int_pass = |states: &mut [crate::rng_core::GeneratorState], int_buffer: &mut [u32]| {
        if cfg.writeback {
            pool.install(|| {
                int_buffer
                    .par_chunks_mut(per_stream)
                    .zip(states.par_iter_mut())
                    .for_each(|(chunk, state)| state.fill(chunk));
            });
        } else {
            pool.install(|| {
                states
                    .par_iter_mut()
                    .for_each(|state| state.advance(cfg.values_per_stream));
            });
        }
    };

    let mut int_times = Vec::with_capacity(cfg.repeats);
    let mut state_digest = 0u64;
    int_pass(&mut initial.clone(), &mut int_buffer);
    for _ in 0..cfg.repeats {
        let mut states = initial.clone();
        let started = Instant::now();
        int_pass(&mut states, &mut int_buffer);
        int_times.push(started.elapsed().as_secs_f64());
        state_digest = final_state_digest(&states);
    }

    let mut uniform_time = None;
    if cfg.uniform {
        let uniform_pass = |states: &mut [crate::rng_core::GeneratorState],
                            uni_buffer: &mut [f32]| {
            if cfg.writeback {
                pool.install(|| {
                    uni_buffer
                        .par_chunks_mut(per_stream)
                        .zip(states.par_iter_mut())
                        .for_each(|(chunk, state)| {
                            for slot in chunk {
                                *slot = to_uniform(state.next_u32());
                            }
                        });
                });
            } else {
                let fold = pool.install(|| {
                    states
                        .par_iter_mut()
                        .map(|state| {
                            let mut acc = 0f32;
                            for _ in 0..per_stream {
                                acc += to_uniform(state.next_u32());
                            }
                            acc.to_bits() as u64
                        })
                        .reduce(|| 0, |a, b| a ^ b)
                });
                std::hint::black_box(fold);
            }
        };
        let mut times = Vec::with_capacity(cfg.repeats);
        uniform_pass(&mut initial.clone(), &mut uni_buffer);
        for _ in 0..cfg.repeats {
            let mut states = initial.clone();
            let started = Instant::now();
            uniform_pass(&mut states, &mut uni_buffer);
            times.push(started.elapsed().as_secs_f64());
        }
        uniform_time = Some(median(&mut times));
    }

    let t = median(&mut int_times);
    if t <= 0.0 {
        return Err(BenchError::ClockFailure);
    }
    let giga = 1e9;
    let count = total as f64;
    // bw and uops are scaled copies of the rate so the report
    // identities (bw = 4 * rate, uops = n_ops * rate) hold bit-exactly.
    let rate = count / (t * giga);
    Ok(BenchReport {
        kind: cfg.kind,
        writeback: cfg.writeback,
        workers: cfg.workers,
        values_per_stream: cfg.values_per_stream,
        stream_count: cfg.stream_count,
        t_seconds: t,
        bw_gbps: cfg.writeback.then_some(4.0 * rate),
        uops_gops: f64::from(op_count(cfg.kind)) * rate,
        rate_gsps: rate,
        uniform_rate_gsps: uniform_time.map(|tu| count / (tu * giga)),
        state_digest,
    })
}

fn final_state_digest(states: &[crate::rng_core::GeneratorState]) -> u64 {
    let words: Vec<u32> = states.iter().flat_map(|s| s.state_words()).collect();
    streams::sequence_digest(&words)
}

fn median(times: &mut [f64]) -> f64 {
    times.sort_by(|a, b| a.total_cmp(b));
    times[times.len() / 2]
}

fn fmt_opt(v: Option<f64>) -> String {
    match v {
        Some(x) => format!("{x}"),
        None => "-".to_string(),
    }
}

/// Human-readable report: one metric row in the classic five-column
/// layout, plus the op-count footer.
pub fn render_text(report: &BenchReport) -> String {
    let label = if report.writeback {
        "W/ writeback"
    } else {
        "W/o writeback"
    };
    let mut out = String::new();
    out.push_str(&format!(
        "kind: {}   workers: {}   streams (N_t): {}   values/stream (n_t): {}\n",
        report.kind, report.workers, report.stream_count, report.values_per_stream
    ));
    out.push_str(&format!(
        "{:<16}{:>12}{:>12}{:>14}{:>14}{:>20}\n",
        "", "t (ms)", "BW (GBps)", "U_ops (GOps)", "rate (GS/s)", "uniform rate (GS/s)"
    ));
    let dash = |v: Option<f64>| match v {
        Some(x) => format!("{x:.4}"),
        None => "-".to_string(),
    };
    out.push_str(&format!(
        "{:<16}{:>12.4}{:>12}{:>14.4}{:>14.4}{:>20}\n",
        label,
        report.t_seconds * 1e3,
        dash(report.bw_gbps),
        report.uops_gops,
        report.rate_gsps,
        dash(report.uniform_rate_gsps),
    ));
    out.push_str(&format!("note: {OP_TABLE_NOTE}\n"));
    out
}

/// Header for the machine-readable row format.
pub const CSV_HEADER: &str =
    "kind,writeback,workers,n_t,N_t,t_seconds,bw_gbps,uops_gops,rate_gsps,uniform_rate_gsps";

/// One machine-readable row; absent metrics render as `-`.
pub fn render_csv_row(report: &BenchReport) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{},{}",
        report.kind,
        report.writeback,
        report.workers,
        report.values_per_stream,
        report.stream_count,
        report.t_seconds,
        fmt_opt(report.bw_gbps),
        report.uops_gops,
        report.rate_gsps,
        fmt_opt(report.uniform_rate_gsps),
    )
}

/// Parse one machine-readable row back into a report (digest excluded:
/// it is not part of the row contract).
pub fn parse_csv_row(row: &str) -> Result<BenchReport, BenchError> {
    let bad = |msg: &str| BenchError::MalformedRow(format!("{msg}: {row}"));
    let fields: Vec<&str> = row.trim_end().split(',').collect();
    if fields.len() != 10 {
        return Err(bad("expected 10 fields"));
    }
    let kind = GeneratorKind::ALL
        .into_iter()
        .find(|k| k.name() == fields[0])
        .ok_or_else(|| bad("unknown kind"))?;
    let parse_f64 = |s: &str| s.parse::<f64>().map_err(|_| bad("bad float"));
    let parse_opt = |s: &str| -> Result<Option<f64>, BenchError> {
        if s == "-" {
            Ok(None)
        } else {
            parse_f64(s).map(Some)
        }
    };
    Ok(BenchReport {
        kind,
        writeback: fields[1].parse().map_err(|_| bad("bad writeback flag"))?,
        workers: fields[2].parse().map_err(|_| bad("bad workers"))?,
        values_per_stream: fields[3].parse().map_err(|_| bad("bad n_t"))?,
        stream_count: fields[4].parse().map_err(|_| bad("bad N_t"))?,
        t_seconds: parse_f64(fields[5])?,
        bw_gbps: parse_opt(fields[6])?,
        uops_gops: parse_f64(fields[7])?,
        rate_gsps: parse_f64(fields[8])?,
        uniform_rate_gsps: parse_opt(fields[9])?,
        state_digest: 0,
    })
}
