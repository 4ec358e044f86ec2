//! Integer-to-uniform conversion.

/// Map a 32-bit word to a single-precision value in `[0, 1)`.
///
/// The word is truncated to its top 24 bits before scaling by `2^-24`,
/// so the conversion is exact in `f32` and the upper bound stays
/// strict. Scaling the full 32 bits would round `2^32 - 1` up to 1.0.
#[inline]
pub fn to_uniform(v: u32) -> f32 {
    const SCALE: f32 = 1.0 / (1u32 << 24) as f32;
    (v >> 8) as f32 * SCALE
}
