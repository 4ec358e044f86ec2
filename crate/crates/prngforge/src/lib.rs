//! Small-state pseudo-random number generators and the machinery to run
//! them as parallel streams.
//!
//! The crate provides:
//!
//! - [`rng_core`]: bit-exact step functions for the multiply-with-carry
//!   generator (two 16-bit lanes combined into one 32-bit output), an
//!   eight-word xorshift generator, the one-word SHR3 xorshift, a linear
//!   congruential generator, and the KISS combination of the three.
//! - [`param_gen`]: enumeration of the valid MWC multipliers (the
//!   safeprime condition), unranking of multiplier pairs, and per-stream
//!   seed derivation from a single master seed.
//! - [`streams`]: the three stream-parallelization schemes
//!   (parameterization, sequence splitting, leapfrogging) plus the
//!   jump-ahead operators they need.
//! - [`bench`]: a throughput harness reporting bandwidth, useful
//!   operations per second, and sample rates in writeback and
//!   no-writeback modes.
//! - [`stats`]: a desk-scale statistical quality battery with p-value
//!   reporting per test.
//!
//! All generator stepping is deterministic and bit-exact across
//! platforms; parallel ensemble output never depends on worker count.

pub mod bench;
pub mod param_gen;
pub mod rng_core;
pub mod stats;
pub mod streams;

pub use rng_core::{GeneratorKind, GeneratorState};
