//! Generator state types and their bit-exact step functions.
//!
//! Every generator is a small recurrence over unsigned words. States are
//! plain values: cloning one forks the sequence, and stepping takes
//! `&mut self` so a state is never advanced from two places at once.
//! There is no global state anywhere in this module.

mod kiss;
mod lcg;
mod mwc;
mod shr3;
mod uniform;
mod xorshift256;

pub use kiss::KissState;
pub use lcg::{LcgState, LCG_INCREMENT, LCG_MULTIPLIER};
pub use mwc::{
    mwc_step_raw, CombinedMwcState, MwcLaneState, DEFAULT_MULTIPLIER_HI, DEFAULT_MULTIPLIER_LO,
};
pub use shr3::Shr3State;
pub use uniform::to_uniform;
pub use xorshift256::{XorShift256State, XORSHIFT_WORDS};

use thiserror::Error;

/// Errors raised when constructing or misusing a generator state.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StateError {
    /// The multiplier fails the safeprime condition (`a * 2^16 - 1` must
    /// be a safeprime).
    #[error("multiplier {0} is invalid: {0} * 2^16 - 1 is not a safeprime")]
    InvalidMultiplier(u16),
    /// The seed is a fixed point of the MWC recurrence and would repeat
    /// itself forever.
    #[error("seed (x={x}, c={c}) is an absorbing state of the recurrence for multiplier {a}")]
    AbsorbingSeed { a: u16, x: u16, c: u16 },
    /// The carry seed is outside the recurrence's state space.
    #[error("carry seed {c} must be below the multiplier {a}")]
    CarryOutOfRange { a: u16, c: u16 },
    /// The two lanes of a combined MWC must use distinct multipliers.
    #[error("combined MWC lanes must use distinct multipliers (got {0} twice)")]
    DuplicateMultiplier(u16),
    /// The all-zero vector is a fixed point of every xorshift map.
    #[error("the all-zero vector cannot seed an xorshift state (it is a fixed point)")]
    ZeroState,
    /// Cursor index outside the state vector.
    #[error("cursor {0} is out of range (state holds {XORSHIFT_WORDS} words)")]
    CursorOutOfRange(usize),
    /// Block stepping was requested mid-block.
    #[error("block stepping requires the cursor at a block boundary (cursor is {0})")]
    MisalignedCursor(usize),
}

/// The generator families provided by this crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GeneratorKind {
    /// Two combined 16-bit multiply-with-carry lanes.
    Mwc,
    /// Eight-word xorshift with seven xorshift operations per output.
    Xorshift256,
    /// (MWC xor LCG) + SHR3.
    Kiss,
    /// 32-bit linear congruential generator.
    Lcg,
    /// One-word 13/17/5 xorshift.
    Shr3,
}

impl GeneratorKind {
    pub const ALL: [GeneratorKind; 5] = [
        GeneratorKind::Mwc,
        GeneratorKind::Xorshift256,
        GeneratorKind::Kiss,
        GeneratorKind::Lcg,
        GeneratorKind::Shr3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GeneratorKind::Mwc => "mwc",
            GeneratorKind::Xorshift256 => "xorshift256",
            GeneratorKind::Kiss => "kiss",
            GeneratorKind::Lcg => "lcg",
            GeneratorKind::Shr3 => "shr3",
        }
    }

    /// Whether an O(log k) jump-ahead exists here. MWC and KISS are
    /// parallelized by parameterization only.
    pub fn is_jumpable(self) -> bool {
        matches!(self, GeneratorKind::Lcg | GeneratorKind::Xorshift256)
    }
}

impl std::fmt::Display for GeneratorKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// A generator state of any kind behind one stepping interface.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GeneratorState {
    Mwc(CombinedMwcState),
    Xorshift256(XorShift256State),
    Kiss(KissState),
    Lcg(LcgState),
    Shr3(Shr3State),
}

impl GeneratorState {
    pub fn kind(&self) -> GeneratorKind {
        match self {
            GeneratorState::Mwc(_) => GeneratorKind::Mwc,
            GeneratorState::Xorshift256(_) => GeneratorKind::Xorshift256,
            GeneratorState::Kiss(_) => GeneratorKind::Kiss,
            GeneratorState::Lcg(_) => GeneratorKind::Lcg,
            GeneratorState::Shr3(_) => GeneratorKind::Shr3,
        }
    }

    /// Advance one step and return the 32-bit output.
    #[inline]
    pub fn next_u32(&mut self) -> u32 {
        match self {
            GeneratorState::Mwc(s) => s.next_u32(),
            GeneratorState::Xorshift256(s) => s.next_u32(),
            GeneratorState::Kiss(s) => s.next_u32(),
            GeneratorState::Lcg(s) => s.next_u32(),
            GeneratorState::Shr3(s) => s.next_u32(),
        }
    }

    /// Fill a slice with consecutive outputs. The kind dispatch happens
    /// once, outside the hot loop; xorshift spans go through its
    /// unrolled block kernel.
    pub fn fill(&mut self, out: &mut [u32]) {
        match self {
            GeneratorState::Mwc(s) => out.iter_mut().for_each(|slot| *slot = s.next_u32()),
            GeneratorState::Xorshift256(s) => s.fill(out),
            GeneratorState::Kiss(s) => out.iter_mut().for_each(|slot| *slot = s.next_u32()),
            GeneratorState::Lcg(s) => out.iter_mut().for_each(|slot| *slot = s.next_u32()),
            GeneratorState::Shr3(s) => out.iter_mut().for_each(|slot| *slot = s.next_u32()),
        }
    }

    /// Advance `steps` outputs without storing them; only the state
    /// evolution remains, like a kernel that persists nothing but its
    /// final state vector.
    pub fn advance(&mut self, steps: u64) {
        match self {
            GeneratorState::Mwc(s) => (0..steps).for_each(|_| {
                s.next_u32();
            }),
            GeneratorState::Xorshift256(s) => s.advance(steps),
            GeneratorState::Kiss(s) => (0..steps).for_each(|_| {
                s.next_u32();
            }),
            GeneratorState::Lcg(s) => (0..steps).for_each(|_| {
                s.next_u32();
            }),
            GeneratorState::Shr3(s) => (0..steps).for_each(|_| {
                s.next_u32();
            }),
        }
    }

    /// The state serialized as decimal-printable words, in a fixed
    /// per-kind order. Used by the CLI state-save format.
    pub fn state_words(&self) -> Vec<u32> {
        match self {
            GeneratorState::Mwc(s) => s.state_words().to_vec(),
            GeneratorState::Xorshift256(s) => {
                let mut words = vec![s.cursor() as u32];
                words.extend_from_slice(&s.words());
                words
            }
            GeneratorState::Kiss(s) => s.state_words().to_vec(),
            GeneratorState::Lcg(s) => vec![s.value()],
            GeneratorState::Shr3(s) => vec![s.value()],
        }
    }
}
