//! KISS: the combined generator.
//!
//! Steps a combined MWC, an SHR3 and an LCG once each and merges their
//! outputs as `(mwc ^ lcg) + shr3` in wrapping 32-bit arithmetic. The
//! seed material is four 32-bit words: two packed MWC lane words, one
//! SHR3 word, one LCG word.

use super::{CombinedMwcState, LcgState, Shr3State, StateError};

/// Combined state: one MWC pair, one SHR3 word, one LCG word.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KissState {
    mwc: CombinedMwcState,
    shr3: Shr3State,
    lcg: LcgState,
}

/// The output combination, separated out so it can be checked against
/// independently stepped components.
#[inline]
pub(crate) fn combine_outputs(mwc: u32, lcg: u32, shr3: u32) -> u32 {
    (mwc ^ lcg).wrapping_add(shr3)
}

impl KissState {
    pub fn new(mwc: CombinedMwcState, shr3: Shr3State, lcg: LcgState) -> Self {
        KissState { mwc, shr3, lcg }
    }

    /// Step all three components once and combine.
    #[inline]
    pub fn next_u32(&mut self) -> u32 {
        let mwc = self.mwc.next_u32();
        let lcg = self.lcg.next_u32();
        let shr3 = self.shr3.next_u32();
        combine_outputs(mwc, lcg, shr3)
    }

    pub fn mwc(&self) -> &CombinedMwcState {
        &self.mwc
    }

    pub fn shr3(&self) -> &Shr3State {
        &self.shr3
    }

    pub fn lcg(&self) -> &LcgState {
        &self.lcg
    }

    /// MWC words, then the SHR3 word, then the LCG word.
    pub fn state_words(&self) -> [u32; 8] {
        let m = self.mwc.state_words();
        [
            m[0],
            m[1],
            m[2],
            m[3],
            m[4],
            m[5],
            self.shr3.value(),
            self.lcg.value(),
        ]
    }
}

/// A convenient fixed seeding used by tests and examples.
#[allow(dead_code)]
pub(crate) fn classic_test_state() -> Result<KissState, StateError> {
    Ok(KissState::new(
        CombinedMwcState::with_default_multipliers(1, 0, 1, 0)?,
        Shr3State::new(2_463_534_242)?,
        LcgState::new(1),
    ))
}
