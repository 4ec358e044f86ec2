//! Eight-word xorshift generator with seven xorshift operations per
//! output.
//!
//! The state is a circular buffer of eight 32-bit words. One step
//! combines five of the buffered words through xorshift factors and
//! writes the result over the oldest word:
//!
//! ```text
//! v_n = (I + L^9)(I + L^13) v_{n-1}
//!     ^ (I + L^7)           v_{n-4}
//!     ^ (I + R^3)           v_{n-5}
//!     ^ (I + R^10)          v_{n-7}
//!     ^ (I + L^24)(I + R^7) v_{n-8}
//! ```
//!
//! where `L`/`R` shift left/right by the exponent and products apply the
//! rightmost factor first. The kernel costs exactly 11 XOR and 7 shift
//! word operations per output. The all-zero vector is a fixed point of
//! the map and is rejected as a seed; from any other seed the state
//! never becomes all-zero because each step is invertible.

use super::StateError;

/// Number of 32-bit words in the state vector.
pub const XORSHIFT_WORDS: usize = 8;

/// State vector plus cursor. The cursor indexes the oldest buffered
/// word (`v_{n-8}`), which is the slot the next output overwrites.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct XorShift256State {
    v: [u32; XORSHIFT_WORDS],
    k: usize,
}

/// The per-output combination kernel: 11 XORs, 7 shifts.
///
/// Arguments are the buffered words by age, oldest first.
#[inline]
fn combine(w_nm8: u32, w_nm7: u32, w_nm5: u32, w_nm4: u32, w_nm1: u32) -> u32 {
    let mut t = w_nm1;
    t ^= t << 13;
    let mut y = t ^ (t << 9);
    let t = w_nm4;
    y ^= t ^ (t << 7);
    let t = w_nm5;
    y ^= t ^ (t >> 3);
    let t = w_nm7;
    y ^= t ^ (t >> 10);
    let mut t = w_nm8;
    t ^= t >> 7;
    y ^= t ^ (t << 24);
    y
}

impl XorShift256State {
    /// Build a state from eight words and a cursor position.
    pub fn new(v: [u32; XORSHIFT_WORDS], k: usize) -> Result<Self, StateError> {
        if v.iter().all(|&w| w == 0) {
            return Err(StateError::ZeroState);
        }
        if k >= XORSHIFT_WORDS {
            return Err(StateError::CursorOutOfRange(k));
        }
        Ok(XorShift256State { v, k })
    }

    /// Build a block-aligned state (cursor at 0).
    pub fn from_words(v: [u32; XORSHIFT_WORDS]) -> Result<Self, StateError> {
        XorShift256State::new(v, 0)
    }

    /// One step: combine the five taps, overwrite the oldest word,
    /// advance the cursor, return the new word.
    #[inline]
    pub fn next_u32(&mut self) -> u32 {
        let k = self.k;
        let y = combine(
            self.v[k],
            self.v[(k + 1) & 7],
            self.v[(k + 3) & 7],
            self.v[(k + 4) & 7],
            self.v[(k + 7) & 7],
        );
        self.v[k] = y;
        self.k = (k + 1) & 7;
        y
    }

    /// Eight outputs as one explicitly unrolled block.
    ///
    /// Produces exactly the same values as eight [`next`](Self::next)
    /// calls, but the buffer rotation is spelled out statement by
    /// statement so no indexed addressing of the state remains. Requires
    /// the cursor at a block boundary.
    pub fn next_block(&mut self) -> Result<[u32; XORSHIFT_WORDS], StateError> {
        if self.k != 0 {
            return Err(StateError::MisalignedCursor(self.k));
        }
        let [v0, v1, v2, v3, v4, v5, v6, v7] = self.v;
        let y0 = combine(v0, v1, v3, v4, v7);
        let y1 = combine(v1, v2, v4, v5, y0);
        let y2 = combine(v2, v3, v5, v6, y1);
        let y3 = combine(v3, v4, v6, v7, y2);
        let y4 = combine(v4, v5, v7, y0, y3);
        let y5 = combine(v5, v6, y0, y1, y4);
        let y6 = combine(v6, v7, y1, y2, y5);
        let y7 = combine(v7, y0, y2, y3, y6);
        self.v = [y0, y1, y2, y3, y4, y5, y6, y7];
        Ok([y0, y1, y2, y3, y4, y5, y6, y7])
    }

    /// Bulk fill using the unrolled block kernel for every aligned
    /// span; identical output to repeated [`next`](Self::next) calls.
    pub fn fill(&mut self, out: &mut [u32]) {
        let mut i = 0;
        while self.k != 0 && i < out.len() {
            out[i] = self.next_u32();
            i += 1;
        }
        while i + XORSHIFT_WORDS <= out.len() {
            let block = self.next_block().expect("cursor is aligned here");
            out[i..i + XORSHIFT_WORDS].copy_from_slice(&block);
            i += XORSHIFT_WORDS;
        }
        while i < out.len() {
            out[i] = self.next_u32();
            i += 1;
        }
    }

    /// Advance by `steps` outputs without materializing them, block
    /// kernel for the aligned spans.
    pub fn advance(&mut self, steps: u64) {
        let mut remaining = steps;
        while self.k != 0 && remaining > 0 {
            self.next_u32();
            remaining -= 1;
        }
        while remaining >= XORSHIFT_WORDS as u64 {
            let _ = self.next_block().expect("cursor is aligned here");
            remaining -= XORSHIFT_WORDS as u64;
        }
        for _ in 0..remaining {
            self.next_u32();
        }
    }

    pub fn words(&self) -> [u32; XORSHIFT_WORDS] {
        self.v
    }

    pub fn cursor(&self) -> usize {
        self.k
    }

    /// The state in age order: index 0 is the oldest word (`v_{n-8}`),
    /// index 7 the newest (`v_{n-1}`). Jump-ahead works in these
    /// cursor-independent coordinates.
    pub fn logical_words(&self) -> [u32; XORSHIFT_WORDS] {
        let mut w = [0u32; XORSHIFT_WORDS];
        for (j, slot) in w.iter_mut().enumerate() {
            *slot = self.v[(self.k + j) & 7];
        }
        w
    }

    /// Rebuild a physical state from age-ordered words at a given
    /// cursor.
    pub fn from_logical_words(w: [u32; XORSHIFT_WORDS], k: usize) -> Result<Self, StateError> {
        if k >= XORSHIFT_WORDS {
            return Err(StateError::CursorOutOfRange(k));
        }
        let mut v = [0u32; XORSHIFT_WORDS];
        for (j, &word) in w.iter().enumerate() {
            v[(k + j) & 7] = word;
        }
        XorShift256State::new(v, k)
    }
}
