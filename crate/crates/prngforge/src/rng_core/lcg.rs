//! 32-bit linear congruential generator.
//!
//! `X' = (a*X + c) mod 2^32` with the classic constants `a = 69069`,
//! `c = 1234567`. The modulus is free through integer wraparound.

/// Default multiplier.
pub const LCG_MULTIPLIER: u32 = 69069;
/// Default increment.
pub const LCG_INCREMENT: u32 = 1_234_567;

/// LCG state. Every 32-bit word is a valid seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LcgState {
    x: u32,
    a: u32,
    c: u32,
}

impl LcgState {
    /// Seed with the classic constants.
    pub fn new(x: u32) -> Self {
        LcgState {
            x,
            a: LCG_MULTIPLIER,
            c: LCG_INCREMENT,
        }
    }

    /// Override the constants. Intended for experiments; the defaults
    /// are what the combined generators use.
    pub fn with_params(a: u32, c: u32, x: u32) -> Self {
        LcgState { x, a, c }
    }

    #[inline]
    pub fn next_u32(&mut self) -> u32 {
        self.x = self.a.wrapping_mul(self.x).wrapping_add(self.c);
        self.x
    }

    pub fn value(&self) -> u32 {
        self.x
    }

    pub fn multiplier(&self) -> u32 {
        self.a
    }

    pub fn increment(&self) -> u32 {
        self.c
    }
}
