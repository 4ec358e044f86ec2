//! One-word 13/17/5 xorshift.
//!
//! The step applies `(I+L^13)`, `(I+R^17)`, `(I+L^5)` to the single
//! state word, in that execution order. Like every xorshift map it is
//! invertible, so a nonzero seed never reaches the all-zero fixed
//! point.

use super::StateError;

/// Single-word xorshift state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Shr3State {
    y: u32,
}

impl Shr3State {
    pub fn new(y: u32) -> Result<Self, StateError> {
        if y == 0 {
            return Err(StateError::ZeroState);
        }
        Ok(Shr3State { y })
    }

    /// `y ^= y << 13; y ^= y >> 17; y ^= y << 5`; returns the new word.
    #[inline]
    pub fn next_u32(&mut self) -> u32 {
        let mut y = self.y;
        y ^= y << 13;
        y ^= y >> 17;
        y ^= y << 5;
        self.y = y;
        y
    }

    pub fn value(&self) -> u32 {
        self.y
    }
}
