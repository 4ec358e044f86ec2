//! Multiplier enumeration and per-stream parameter derivation.
//!
//! An MWC multiplier `a` over base `b = 2^base_bits` is valid when
//! `a*b - 1` is a safeprime (a prime `p` with `(p-1)/2` also prime).
//! For the 16-bit base there are exactly 392 such multipliers, which
//! makes C(392, 2) = 76636 distinct lane pairs available for
//! parameterized streams. This module enumerates the table, unranks
//! pair indices into multiplier pairs, and derives per-stream seed
//! words from a 64-bit master seed.

use crate::rng_core::MwcLaneState;
use thiserror::Error;

/// Errors from enumeration and stream parameter derivation.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParamError {
    #[error("unsupported base bits {0}: supported values are 8 and 16")]
    UnsupportedBaseBits(u32),
    #[error(
        "stream index {index} out of range: a table of {table_len} multipliers \
         yields {pair_count} distinct pairs"
    )]
    StreamIndexOutOfRange {
        index: u64,
        table_len: usize,
        pair_count: u64,
    },
    #[error("stream count {count} exceeds the {pair_count} distinct multiplier pairs")]
    CountOutOfRange { count: u64, pair_count: u64 },
}

/// Deterministic Miller-Rabin for 64-bit inputs.
///
/// The witness set 2..37 decides primality exactly for all `n < 2^64`,
/// so there is no error probability to tune.
pub fn is_prime_u64(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &WITNESSES {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// `p` is a safeprime: prime with `(p - 1) / 2` also prime.
pub fn is_safeprime(p: u64) -> bool {
    p >= 5 && is_prime_u64(p) && is_prime_u64((p - 1) / 2)
}

/// Whether `a` is a valid 16-bit-base MWC multiplier.
pub fn is_valid_multiplier(a: u16) -> bool {
    a >= 2 && is_safeprime(u64::from(a) * 65536 - 1)
}

/// The enumerated multipliers for one base, ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiplierTable {
    base_bits: u32,
    multipliers: Vec<u32>,
}

impl MultiplierTable {
    /// Enumerate all valid multipliers for `base_bits` in {8, 16}.
    pub fn enumerate(base_bits: u32) -> Result<Self, ParamError> {
        if base_bits != 8 && base_bits != 16 {
            return Err(ParamError::UnsupportedBaseBits(base_bits));
        }
        let base = 1u64 << base_bits;
        let multipliers = (2..base)
            .filter(|&a| is_safeprime(a * base - 1))
            .map(|a| a as u32)
            .collect();
        Ok(MultiplierTable {
            base_bits,
            multipliers,
        })
    }

    pub fn base_bits(&self) -> u32 {
        self.base_bits
    }

    pub fn len(&self) -> usize {
        self.multipliers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.multipliers.is_empty()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.multipliers
    }

    pub fn contains(&self, a: u32) -> bool {
        self.multipliers.binary_search(&a).is_ok()
    }

    /// Number of distinct unordered multiplier pairs, C(n, 2).
    pub fn pair_count(&self) -> u64 {
        let n = self.multipliers.len() as u64;
        n * (n - 1) / 2
    }

    /// Unrank a stream index into an ascending multiplier pair.
    ///
    /// Pairs are ordered colexicographically: pair `{i, j}` with
    /// `i < j` has rank `C(j, 2) + i`. The map is a bijection from
    /// `[0, C(n, 2))` onto the unordered pairs.
    pub fn pair_for_stream(&self, stream_index: u64) -> Result<(u32, u32), ParamError> {
        let pair_count = self.pair_count();
        if stream_index >= pair_count {
            return Err(ParamError::StreamIndexOutOfRange {
                index: stream_index,
                table_len: self.multipliers.len(),
                pair_count,
            });
        }
        // Largest j with j*(j-1)/2 <= rank, then i is the remainder.
        let mut j = ((1.0 + (1.0 + 8.0 * stream_index as f64).sqrt()) / 2.0) as u64;
        while j * (j - 1) / 2 > stream_index {
            j -= 1;
        }
        while (j + 1) * j / 2 <= stream_index {
            j += 1;
        }
        let i = stream_index - j * (j - 1) / 2;
        debug_assert!(i < j);
        Ok((self.multipliers[i as usize], self.multipliers[j as usize]))
    }

    /// Fixture format: one decimal multiplier per line, ascending,
    /// trailing newline.
    pub fn to_fixture_string(&self) -> String {
        let mut out = String::new();
        for a in &self.multipliers {
            out.push_str(&a.to_string());
            out.push('\n');
        }
        out
    }
}

/// Everything a stream needs: its index, an ascending multiplier pair
/// (the first multiplier drives the high MWC lane), and four seed
/// words (two packed MWC lane words, one SHR3 word, one LCG word).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StreamParams {
    pub stream_index: u64,
    pub multipliers: (u16, u16),
    pub seeds: [u32; 4],
}

pub(crate) const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// One draw from the 64-bit mixing sequence.
pub(crate) fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(GOLDEN_GAMMA);
    let mut z = *state;
    z ^= z >> 30;
    z = z.wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z ^= z >> 27;
    z = z.wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^= z >> 31;
    z
}

/// Derive parameters for `count` streams from one master seed.
///
/// Stream `i` gets multiplier pair `pair_for_stream(i)` and four seed
/// words drawn from the mixing sequence; a word that a generator
/// constructor would reject (carry out of range, absorbing state, zero
/// xorshift word) is discarded and redrawn. The result depends only on
/// `(master_seed, stream_index)`.
pub fn seed_streams(
    table: &MultiplierTable,
    master_seed: u64,
    count: u64,
) -> Result<Vec<StreamParams>, ParamError> {
    let pair_count = table.pair_count();
    if count > pair_count {
        return Err(ParamError::CountOutOfRange { count, pair_count });
    }
    let mut mix = master_seed;
    let mut params = Vec::with_capacity(count as usize);
    for stream_index in 0..count {
        let (m_hi, m_lo) = table.pair_for_stream(stream_index)?;
        let (a_hi, a_lo) = (m_hi as u16, m_lo as u16);
        let seeds = [
            draw_word(&mut mix, |w| MwcLaneState::seed_word_ok(a_hi, w)),
            draw_word(&mut mix, |w| MwcLaneState::seed_word_ok(a_lo, w)),
            draw_word(&mut mix, |w| w != 0),
            draw_word(&mut mix, |_| true),
        ];
        params.push(StreamParams {
            stream_index,
            multipliers: (a_hi, a_lo),
            seeds,
        });
    }
    Ok(params)
}

pub(crate) fn draw_word(mix: &mut u64, accept: impl Fn(u32) -> bool) -> u32 {
    loop {
        let w = splitmix64(mix) as u32;
        if accept(w) {
            return w;
        }
    }
}
