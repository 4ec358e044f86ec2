//! Independent reference implementations used by the acceptance suite.
//!
//! Nothing here shares code or representation with the production
//! crate: the integer recurrences are evaluated in arbitrary-precision
//! arithmetic with explicit division and remainder (no shifts, no
//! masks), the xorshift recurrences operate on explicit bit arrays
//! where a shift is an index move, and primality is re-proved by trial
//! division.

use num_bigint::BigUint;

fn big(v: u64) -> BigUint {
    BigUint::from(v)
}

fn to_u32(v: &BigUint) -> u32 {
    let digits = v.to_u32_digits();
    match digits.len() {
        0 => 0,
        1 => digits[0],
        _ => panic!("value exceeds 32 bits"),
    }
}

/// One multiply-with-carry lane evaluated in big-integer arithmetic.
#[derive(Clone)]
pub struct BigMwcLane {
    pub a: u64,
    pub x: BigUint,
    pub c: BigUint,
}

impl BigMwcLane {
    pub fn new(a: u64, x: u64, c: u64) -> Self {
        BigMwcLane {
            a,
            x: big(x),
            c: big(c),
        }
    }

    /// `t = a*x + c`; the residue is `t mod 2^16`, the carry `t div 2^16`.
    pub fn step(&mut self) -> u32 {
        let base = big(1u64 << 16);
        let t = big(self.a) * &self.x + &self.c;
        self.x = &t % &base;
        self.c = &t / &base;
        to_u32(&self.x)
    }
}

/// Two lanes concatenated: first lane scaled by 2^16 plus the second.
pub struct BigCombinedMwc {
    pub hi: BigMwcLane,
    pub lo: BigMwcLane,
}

impl BigCombinedMwc {
    pub fn step(&mut self) -> u32 {
        let hi = self.hi.step();
        let lo = self.lo.step();
        to_u32(&(big(u64::from(hi)) * big(1u64 << 16) + big(u64::from(lo))))
    }
}

/// The LCG recurrence in big-integer arithmetic.
pub struct BigLcg {
    pub x: BigUint,
}

impl BigLcg {
    pub fn new(x: u64) -> Self {
        BigLcg { x: big(x) }
    }

    pub fn step(&mut self) -> u32 {
        let modulus = big(1u64 << 32);
        self.x = (big(69069) * &self.x + big(1_234_567)) % &modulus;
        to_u32(&self.x)
    }
}

/// A 32-bit word as an explicit array of bits, index 0 the least
/// significant.
pub type BitWord = [u8; 32];

pub fn word_to_bits(v: u32) -> BitWord {
    let mut bits = [0u8; 32];
    for (i, bit) in bits.iter_mut().enumerate() {
        *bit = ((v >> i) & 1) as u8;
    }
    bits
}

pub fn bits_to_word(bits: &BitWord) -> u32 {
    bits.iter()
        .enumerate()
        .fold(0u32, |acc, (i, &b)| acc | (u32::from(b) << i))
}

/// `x ^ (x << s)` as index arithmetic on bits.
pub fn xorshift_left(x: &BitWord, s: usize) -> BitWord {
    let mut out = [0u8; 32];
    for i in 0..32 {
        let shifted = if i >= s { x[i - s] } else { 0 };
        out[i] = x[i] ^ shifted;
    }
    out
}

/// `x ^ (x >> s)` as index arithmetic on bits.
pub fn xorshift_right(x: &BitWord, s: usize) -> BitWord {
    let mut out = [0u8; 32];
    for i in 0..32 {
        let shifted = if i + s < 32 { x[i + s] } else { 0 };
        out[i] = x[i] ^ shifted;
    }
    out
}

fn xor_words(a: &BitWord, b: &BitWord) -> BitWord {
    let mut out = [0u8; 32];
    for i in 0..32 {
        out[i] = a[i] ^ b[i];
    }
    out
}

/// The 13/17/5 single-word xorshift on bit arrays.
pub struct BitShr3 {
    pub y: BitWord,
}

impl BitShr3 {
    pub fn new(y: u32) -> Self {
        BitShr3 { y: word_to_bits(y) }
    }

    pub fn step(&mut self) -> u32 {
        self.y = xorshift_left(&self.y, 13);
        self.y = xorshift_right(&self.y, 17);
        self.y = xorshift_left(&self.y, 5);
        bits_to_word(&self.y)
    }
}

/// The eight-word xorshift recurrence on bit arrays, in age order
/// (index 0 is the oldest word).
pub struct BitXorShift256 {
    pub w: [BitWord; 8],
}

impl BitXorShift256 {
    /// Words given oldest first.
    pub fn new(words: [u32; 8]) -> Self {
        let mut w = [[0u8; 32]; 8];
        for (slot, v) in w.iter_mut().zip(words) {
            *slot = word_to_bits(v);
        }
        BitXorShift256 { w }
    }

    /// Products apply their rightmost factor first.
    pub fn step(&mut self) -> u32 {
        let newest = xorshift_left(&xorshift_left(&self.w[7], 13), 9);
        let m4 = xorshift_left(&self.w[4], 7);
        let m5 = xorshift_right(&self.w[3], 3);
        let m7 = xorshift_right(&self.w[1], 10);
        let m8 = xorshift_left(&xorshift_right(&self.w[0], 7), 24);
        let y = xor_words(
            &xor_words(&newest, &m4),
            &xor_words(&xor_words(&m5, &m7), &m8),
        );
        self.w.rotate_left(1);
        self.w[7] = y;
        bits_to_word(&y)
    }
}

/// The KISS combination evaluated over the reference components:
/// big-integer XOR and modular addition.
pub struct BigKiss {
    pub mwc: BigCombinedMwc,
    pub shr3: BitShr3,
    pub lcg: BigLcg,
}

impl BigKiss {
    pub fn step(&mut self) -> u32 {
        let mwc = self.mwc.step();
        let lcg = self.lcg.step();
        let shr3 = self.shr3.step();
        let xored = big(u64::from(mwc)) ^ big(u64::from(lcg));
        to_u32(&((xored + big(u64::from(shr3))) % big(1u64 << 32)))
    }
}

/// A 256x256 GF(2) matrix as explicit bit rows; built from shift
/// matrices and matrix products, never from the generator itself.
pub struct BitMatrix256 {
    /// rows[r][c] = 1 when output bit r depends on input bit c.
    pub rows: Vec<[u8; 256]>,
}

/// 32x32 block matrices over GF(2).
type Block = [[u8; 32]; 32];

fn block_identity() -> Block {
    let mut m = [[0u8; 32]; 32];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1;
    }
    m
}

/// `(I + L^s)`: output bit r = input bit r + input bit r-s.
fn block_xorshift_left(s: usize) -> Block {
    let mut m = block_identity();
    for r in s..32 {
        m[r][r - s] ^= 1;
    }
    m
}

/// `(I + R^s)`: output bit r = input bit r + input bit r+s.
fn block_xorshift_right(s: usize) -> Block {
    let mut m = block_identity();
    for r in 0..32 - s {
        m[r][r + s] ^= 1;
    }
    m
}

/// Matrix product over GF(2); `a * b` applies `b` first.
fn block_mul(a: &Block, b: &Block) -> Block {
    let mut out = [[0u8; 32]; 32];
    for r in 0..32 {
        for k in 0..32 {
            if a[r][k] == 1 {
                for c in 0..32 {
                    out[r][c] ^= b[k][c];
                }
            }
        }
    }
    out
}

impl BitMatrix256 {
    /// Assemble the one-step transition matrix for the age-ordered
    /// state: rows 0..223 shift each word up one slot, the last 32
    /// rows combine the five taps through their xorshift coefficient
    /// matrices.
    pub fn one_step() -> Self {
        let mut rows = vec![[0u8; 256]; 256];
        // w'_j = w_{j+1} for j < 7.
        for j in 0..7 {
            for b in 0..32 {
                rows[j * 32 + b][(j + 1) * 32 + b] = 1;
            }
        }
        // w'_7 = sum of coefficient blocks applied to the taps.
        let taps: [(usize, Block); 5] = [
            (
                7,
                block_mul(&block_xorshift_left(9), &block_xorshift_left(13)),
            ),
            (4, block_xorshift_left(7)),
            (3, block_xorshift_right(3)),
            (1, block_xorshift_right(10)),
            (
                0,
                block_mul(&block_xorshift_left(24), &block_xorshift_right(7)),
            ),
        ];
        for (word, block) in &taps {
            for r in 0..32 {
                for c in 0..32 {
                    rows[7 * 32 + r][word * 32 + c] ^= block[r][c];
                }
            }
        }
        BitMatrix256 { rows }
    }

    /// Matrix-vector product over GF(2); the vector is the age-ordered
    /// state as 256 bits.
    pub fn apply(&self, state: &[u8; 256]) -> [u8; 256] {
        let mut out = [0u8; 256];
        for (r, row) in self.rows.iter().enumerate() {
            let mut acc = 0u8;
            for (c, &bit) in row.iter().enumerate() {
                acc ^= bit & state[c];
            }
            out[r] = acc;
        }
        out
    }
}

pub fn state_to_bits(words: [u32; 8]) -> [u8; 256] {
    let mut bits = [0u8; 256];
    for (j, v) in words.into_iter().enumerate() {
        for i in 0..32 {
            bits[j * 32 + i] = ((v >> i) & 1) as u8;
        }
    }
    bits
}

pub fn bits_to_state(bits: &[u8; 256]) -> [u32; 8] {
    let mut words = [0u32; 8];
    for (j, w) in words.iter_mut().enumerate() {
        for i in 0..32 {
            *w |= u32::from(bits[j * 32 + i]) << i;
        }
    }
    words
}

/// Trial-division primality; feasible for anything below 2^32.
pub fn trial_division_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// The safeprime condition re-proved by trial division.
pub fn trial_division_safeprime(p: u64) -> bool {
    trial_division_prime(p) && trial_division_prime((p - 1) / 2)
}
