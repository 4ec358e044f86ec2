//! Multiply-with-carry lanes and the combined 32-bit generator.
//!
//! One lane iterates `t = a*x + c` in 32-bit arithmetic with base
//! `b = 2^16`: the new residue is the low half of `t` and the new carry
//! the high half, so the modulo and the carry extraction are a mask and
//! a shift. Two lanes with distinct multipliers run side by side and
//! their 16-bit outputs are concatenated into one 32-bit value.

use super::StateError;
use crate::param_gen;

/// Classic default multiplier for the high lane.
pub const DEFAULT_MULTIPLIER_HI: u16 = 36969;
/// Classic default multiplier for the low lane.
pub const DEFAULT_MULTIPLIER_LO: u16 = 18000;

/// One 16-bit multiply-with-carry lane.
///
/// Valid states have `c < a` and exclude the two fixed points `(0, 0)`
/// and `(2^16-1, a-1)`; on that set the recurrence is a permutation and
/// every orbit has the full period.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MwcLaneState {
    x: u16,
    c: u16,
    a: u16,
}

impl MwcLaneState {
    /// Build a lane, checking the multiplier (safeprime condition) and
    /// the seed (carry range, absorbing states).
    pub fn new(a: u16, x: u16, c: u16) -> Result<Self, StateError> {
        if !param_gen::is_valid_multiplier(a) {
            return Err(StateError::InvalidMultiplier(a));
        }
        Self::seeded(a, x, c)
    }

    /// Seed validation only; the caller has already vetted `a`.
    pub(crate) fn seeded(a: u16, x: u16, c: u16) -> Result<Self, StateError> {
        if c >= a {
            return Err(StateError::CarryOutOfRange { a, c });
        }
        if (x == 0 && c == 0) || (x == u16::MAX && c == a - 1) {
            return Err(StateError::AbsorbingSeed { a, x, c });
        }
        Ok(MwcLaneState { x, c, a })
    }

    /// Build a lane from a packed seed word: residue in the high half,
    /// carry in the low half.
    pub fn from_seed_word(a: u16, word: u32) -> Result<Self, StateError> {
        MwcLaneState::new(a, (word >> 16) as u16, (word & 0xFFFF) as u16)
    }

    /// Whether `from_seed_word(a, word)` would accept the seed, assuming
    /// `a` itself is valid. Used by seed derivation to redraw bad words.
    pub fn seed_word_ok(a: u16, word: u32) -> bool {
        let (x, c) = ((word >> 16) as u16, (word & 0xFFFF) as u16);
        c < a && !(x == 0 && c == 0) && !(x == u16::MAX && c == a - 1)
    }

    /// One step: `t = a*x + c`; the low 16 bits of `t` become the new
    /// residue (and the output), the high 16 bits the new carry.
    #[inline]
    pub fn next_u16(&mut self) -> u16 {
        let t = u32::from(self.a) * u32::from(self.x) + u32::from(self.c);
        self.x = (t & 0xFFFF) as u16;
        self.c = (t >> 16) as u16;
        self.x
    }

    pub fn residue(&self) -> u16 {
        self.x
    }

    pub fn carry(&self) -> u16 {
        self.c
    }

    pub fn multiplier(&self) -> u16 {
        self.a
    }
}

/// One multiply-with-carry step with an arbitrary power-of-two base.
///
/// Returns `(new_x, new_c)`. Desk-scale bases (e.g. `base_bits = 4`)
/// keep the whole state space small enough to walk exhaustively.
pub fn mwc_step_raw(a: u32, x: u32, c: u32, base_bits: u32) -> (u32, u32) {
    assert!((1..=16).contains(&base_bits), "base_bits out of range");
    let t = u64::from(a) * u64::from(x) + u64::from(c);
    let mask = (1u64 << base_bits) - 1;
    ((t & mask) as u32, (t >> base_bits) as u32)
}

/// Two MWC lanes with distinct multipliers, stepped together.
///
/// Each step advances both lanes once and concatenates their outputs:
/// the first ("hi") lane fills bits 31..16, the second bits 15..0.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CombinedMwcState {
    hi: MwcLaneState,
    lo: MwcLaneState,
}

impl CombinedMwcState {
    pub fn new(hi: MwcLaneState, lo: MwcLaneState) -> Result<Self, StateError> {
        if hi.multiplier() == lo.multiplier() {
            return Err(StateError::DuplicateMultiplier(hi.multiplier()));
        }
        Ok(CombinedMwcState { hi, lo })
    }

    /// Both lanes from `(multiplier, seed word)` pairs.
    pub fn from_seed_words(
        a_hi: u16,
        word_hi: u32,
        a_lo: u16,
        word_lo: u32,
    ) -> Result<Self, StateError> {
        CombinedMwcState::new(
            MwcLaneState::from_seed_word(a_hi, word_hi)?,
            MwcLaneState::from_seed_word(a_lo, word_lo)?,
        )
    }

    /// The classic 36969/18000 pair with explicit seeds. The multipliers
    /// are still validated against the safeprime condition, never
    /// trusted.
    pub fn with_default_multipliers(
        x_hi: u16,
        c_hi: u16,
        x_lo: u16,
        c_lo: u16,
    ) -> Result<Self, StateError> {
        CombinedMwcState::new(
            MwcLaneState::new(DEFAULT_MULTIPLIER_HI, x_hi, c_hi)?,
            MwcLaneState::new(DEFAULT_MULTIPLIER_LO, x_lo, c_lo)?,
        )
    }

    /// Step both lanes once; the hi lane's value takes the high half.
    #[inline]
    pub fn next_u32(&mut self) -> u32 {
        let hi = self.hi.next_u16();
        let lo = self.lo.next_u16();
        (u32::from(hi) << 16) | u32::from(lo)
    }

    pub fn hi(&self) -> &MwcLaneState {
        &self.hi
    }

    pub fn lo(&self) -> &MwcLaneState {
        &self.lo
    }

    /// `[a_hi, x_hi, c_hi, a_lo, x_lo, c_lo]` for the state-save format.
    pub fn state_words(&self) -> [u32; 6] {
        [
            u32::from(self.hi.a),
            u32::from(self.hi.x),
            u32::from(self.hi.c),
            u32::from(self.lo.a),
            u32::from(self.lo.x),
            u32::from(self.lo.c),
        ]
    }
}
