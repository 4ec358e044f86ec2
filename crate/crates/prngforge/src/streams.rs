//! Ensembles of independent generator streams.
//!
//! Three schemes turn one master seed into non-overlapping streams:
//!
//! - **parameterize**: every stream is a structurally different
//!   generator (distinct MWC multiplier pairs, distinct seeds). Works
//!   for every kind and is the only scheme for MWC and KISS.
//! - **split**: stream `j` starts `j * B` steps into one master
//!   sequence, so the streams' blocks tile it exactly. Requires a
//!   jump-ahead, so only the LCG and xorshift kinds qualify.
//! - **leapfrog**: stream `j` yields the decimated subsequence
//!   `R_j, R_{j+N}, R_{j+2N}, ...`. Also jump-based.
//!
//! A split stream owns exactly its block: stepping its final state
//! further walks into the next stream's segment, and no continuation
//! policy is defined past the block boundary.
//!
//! Ensemble generation may fan streams out across worker threads; the
//! output bytes are a pure function of the configuration and never of
//! the worker count.

use crate::param_gen::{self, MultiplierTable, ParamError, StreamParams};
use crate::rng_core::{
    CombinedMwcState, GeneratorKind, GeneratorState, KissState, LcgState, Shr3State, StateError,
    XorShift256State, XORSHIFT_WORDS,
};
use rayon::prelude::*;
use std::sync::OnceLock;
use thiserror::Error;

/// How an ensemble's streams relate to one another.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    Parameterize,
    Split,
    Leapfrog,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::Parameterize => "parameterize",
            Scheme::Split => "split",
            Scheme::Leapfrog => "leapfrog",
        }
    }
}

/// Full description of an ensemble run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnsembleConfig {
    pub kind: GeneratorKind,
    pub stream_count: u64,
    pub per_stream_count: u64,
    pub master_seed: u64,
    pub scheme: Scheme,
    pub worker_count: usize,
}

/// Errors from stream construction and ensemble generation.
#[derive(Debug, Error)]
pub enum EnsembleError {
    #[error(
        "{scheme} requires a jumpable generator (lcg or xorshift256); \
         parallelize {kind} streams with the parameterize scheme instead"
    )]
    NotJumpable {
        kind: GeneratorKind,
        scheme: &'static str,
    },
    #[error("stream_count must be at least 1")]
    NoStreams,
    #[error("per_stream_count must be at least 1")]
    NoValues,
    #[error("worker_count must be at least 1")]
    NoWorkers,
    #[error(transparent)]
    Params(#[from] ParamError),
    #[error(transparent)]
    State(#[from] StateError),
    #[error("sink failed on stream {stream}: {source}")]
    Sink {
        stream: usize,
        #[source]
        source: std::io::Error,
    },
    #[error("worker pool construction failed: {0}")]
    Pool(String),
}

fn multiplier_table() -> &'static MultiplierTable {
    static TABLE: OnceLock<MultiplierTable> = OnceLock::new();
    TABLE.get_or_init(|| MultiplierTable::enumerate(16).expect("16 is a supported base"))
}

/// Build a generator state of the requested kind from stream
/// parameters.
///
/// MWC and KISS consume the multiplier pair plus their seed words
/// directly. The xorshift256 state needs eight words, which are
/// expanded deterministically from the four-word quota through the
/// same mixing sequence used to derive them.
pub fn state_from_params(
    kind: GeneratorKind,
    params: &StreamParams,
) -> Result<GeneratorState, EnsembleError> {
    let (a_hi, a_lo) = params.multipliers;
    let s = params.seeds;
    let state = match kind {
        GeneratorKind::Mwc => {
            GeneratorState::Mwc(CombinedMwcState::from_seed_words(a_hi, s[0], a_lo, s[1])?)
        }
        GeneratorKind::Kiss => GeneratorState::Kiss(KissState::new(
            CombinedMwcState::from_seed_words(a_hi, s[0], a_lo, s[1])?,
            Shr3State::new(s[2])?,
            LcgState::new(s[3]),
        )),
        GeneratorKind::Lcg => GeneratorState::Lcg(LcgState::new(s[3])),
        GeneratorKind::Shr3 => GeneratorState::Shr3(Shr3State::new(s[2])?),
        GeneratorKind::Xorshift256 => {
            let mut mix = ((s[0] as u64) << 32 | s[1] as u64)
                ^ ((s[2] as u64) << 32 | s[3] as u64).wrapping_mul(param_gen::GOLDEN_GAMMA);
            let v = loop {
                let mut v = [0u32; XORSHIFT_WORDS];
                for word in &mut v {
                    *word = param_gen::splitmix64(&mut mix) as u32;
                }
                if v.iter().any(|&w| w != 0) {
                    break v;
                }
            };
            GeneratorState::Xorshift256(XorShift256State::from_words(v)?)
        }
    };
    Ok(state)
}

/// The master state for `(kind, master_seed)`: the state that stream 0
/// uses and that split and leapfrog ensembles jump away from.
///
/// The single-word kinds seed directly from the master seed's low 32
/// bits, so their master sequence is the textbook sequence of that
/// seed (an all-zero xorshift word falls back to a mixed draw). MWC
/// and KISS run on the classic default multiplier pair with seed words
/// drawn from the mixing sequence; the multi-word xorshift expands the
/// master seed through the same sequence.
pub fn master_state(
    kind: GeneratorKind,
    master_seed: u64,
) -> Result<GeneratorState, EnsembleError> {
    use crate::rng_core::MwcLaneState;
    use crate::rng_core::{DEFAULT_MULTIPLIER_HI, DEFAULT_MULTIPLIER_LO};

    let state = match kind {
        GeneratorKind::Lcg => GeneratorState::Lcg(LcgState::new(master_seed as u32)),
        GeneratorKind::Shr3 => {
            let mut y = master_seed as u32;
            let mut mix = master_seed;
            while y == 0 {
                y = param_gen::splitmix64(&mut mix) as u32;
            }
            GeneratorState::Shr3(Shr3State::new(y)?)
        }
        GeneratorKind::Xorshift256 => {
            let mut mix = master_seed;
            let v = loop {
                let mut v = [0u32; XORSHIFT_WORDS];
                for word in &mut v {
                    *word = param_gen::splitmix64(&mut mix) as u32;
                }
                if v.iter().any(|&w| w != 0) {
                    break v;
                }
            };
            GeneratorState::Xorshift256(XorShift256State::from_words(v)?)
        }
        GeneratorKind::Mwc | GeneratorKind::Kiss => {
            let mut mix = master_seed;
            let w_hi = param_gen::draw_word(&mut mix, |w| {
                MwcLaneState::seed_word_ok(DEFAULT_MULTIPLIER_HI, w)
            });
            let w_lo = param_gen::draw_word(&mut mix, |w| {
                MwcLaneState::seed_word_ok(DEFAULT_MULTIPLIER_LO, w)
            });
            let mwc = CombinedMwcState::from_seed_words(
                DEFAULT_MULTIPLIER_HI,
                w_hi,
                DEFAULT_MULTIPLIER_LO,
                w_lo,
            )?;
            match kind {
                GeneratorKind::Mwc => GeneratorState::Mwc(mwc),
                _ => {
                    let shr3 = param_gen::draw_word(&mut mix, |w| w != 0);
                    let lcg = param_gen::draw_word(&mut mix, |_| true);
                    GeneratorState::Kiss(KissState::new(
                        mwc,
                        Shr3State::new(shr3)?,
                        LcgState::new(lcg),
                    ))
                }
            }
        }
    };
    Ok(state)
}

/// Advance an LCG by `steps` applications of its recurrence in
/// O(log steps).
///
/// Uses the closed form `X_k = a^k X + c S_k` with
/// `S_k = 1 + a + ... + a^(k-1)`, accumulating both `a^k` and `S_k`
/// through the binary expansion of `k` (the even modulus rules out a
/// division by `a - 1`).
pub fn lcg_jump(state: &LcgState, steps: u64) -> LcgState {
    let (apow, sum) = lcg_affine(state.multiplier(), steps);
    let x = apow
        .wrapping_mul(state.value())
        .wrapping_add(state.increment().wrapping_mul(sum));
    LcgState::with_params(state.multiplier(), state.increment(), x)
}

/// `(a^steps mod 2^32, sum of a^i for i < steps mod 2^32)`.
fn lcg_affine(a: u32, steps: u64) -> (u32, u32) {
    let mut apow = 1u32; // a^prefix
    let mut sum = 0u32; // S_prefix
    for bit in (0..u64::BITS - steps.leading_zeros()).rev() {
        // prefix -> 2*prefix: S_{2n} = S_n * (a^n + 1), a^{2n} = (a^n)^2
        sum = sum.wrapping_mul(apow.wrapping_add(1));
        apow = apow.wrapping_mul(apow);
        if (steps >> bit) & 1 == 1 {
            // 2*prefix -> 2*prefix + 1: S_{n+1} = a * S_n + 1
            sum = sum.wrapping_mul(a).wrapping_add(1);
            apow = apow.wrapping_mul(a);
        }
    }
    (apow, sum)
}

/// A 256x256 bit matrix over GF(2) acting on the xorshift256 state in
/// age-ordered coordinates, together with the cursor advance it
/// represents.
///
/// Applying the one-step matrix to a state vector performs exactly one
/// [`XorShift256State::next`] state update (output value aside).
#[derive(Clone, PartialEq, Eq)]
pub struct JumpMatrix {
    /// Column-major: `cols[i]` is the image of unit state bit `i`,
    /// packed as four u64 limbs.
    cols: Vec<[u64; 4]>,
    /// Steps represented, modulo the buffer length; fixes the cursor
    /// of jumped states so they match sequential stepping bit-exactly.
    advance: u8,
}

const STATE_BITS: usize = 256;

impl JumpMatrix {
    pub fn identity() -> Self {
        let mut cols = vec![[0u64; 4]; STATE_BITS];
        for (i, col) in cols.iter_mut().enumerate() {
            col[i / 64] = 1u64 << (i % 64);
        }
        JumpMatrix { cols, advance: 0 }
    }

    /// The one-step transition matrix, assembled column by column from
    /// the step function applied to unit states.
    pub fn one_step() -> Self {
        let mut cols = vec![[0u64; 4]; STATE_BITS];
        for (i, col) in cols.iter_mut().enumerate() {
            let mut w = [0u32; XORSHIFT_WORDS];
            w[i / 32] = 1u32 << (i % 32);
            let mut state =
                XorShift256State::from_logical_words(w, 0).expect("unit vector is nonzero");
            state.next_u32();
            *col = pack_words(state.logical_words());
        }
        JumpMatrix { cols, advance: 1 }
    }

    /// Matrix product `self * rhs` (apply `rhs` first).
    pub fn compose(&self, rhs: &JumpMatrix) -> JumpMatrix {
        let cols = rhs.cols.iter().map(|col| self.apply_bits(*col)).collect();
        JumpMatrix {
            cols,
            advance: (self.advance + rhs.advance) % XORSHIFT_WORDS as u8,
        }
    }

    fn apply_bits(&self, v: [u64; 4]) -> [u64; 4] {
        let mut out = [0u64; 4];
        for (limb, &limb_bits) in v.iter().enumerate() {
            let mut bits = limb_bits;
            while bits != 0 {
                let bit = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                let col = &self.cols[limb * 64 + bit];
                for (o, c) in out.iter_mut().zip(col) {
                    *o ^= c;
                }
            }
        }
        out
    }

    /// Jump a state forward by the number of steps this matrix
    /// represents.
    pub fn apply(&self, state: &XorShift256State) -> XorShift256State {
        let w = self.apply_bits(pack_words(state.logical_words()));
        let k = (state.cursor() + self.advance as usize) % XORSHIFT_WORDS;
        XorShift256State::from_logical_words(unpack_words(w), k)
            .expect("jump of a valid state is valid: the transition is invertible")
    }
}

impl std::fmt::Debug for JumpMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("JumpMatrix")
            .field("advance", &self.advance)
            .finish_non_exhaustive()
    }
}

fn pack_words(w: [u32; XORSHIFT_WORDS]) -> [u64; 4] {
    let mut out = [0u64; 4];
    for (i, &word) in w.iter().enumerate() {
        out[i / 2] |= (word as u64) << (32 * (i % 2));
    }
    out
}

fn unpack_words(bits: [u64; 4]) -> [u32; XORSHIFT_WORDS] {
    let mut out = [0u32; XORSHIFT_WORDS];
    for (i, word) in out.iter_mut().enumerate() {
        *word = (bits[i / 2] >> (32 * (i % 2))) as u32;
    }
    out
}

/// The one-step matrix raised to `steps` by square-and-multiply.
pub fn build_xorshift_jump(steps: u64) -> JumpMatrix {
    let mut result = JumpMatrix::identity();
    let mut square = JumpMatrix::one_step();
    let mut remaining = steps;
    while remaining > 0 {
        if remaining & 1 == 1 {
            result = square.compose(&result);
        }
        remaining >>= 1;
        if remaining > 0 {
            square = square.compose(&square);
        }
    }
    result
}

fn require_jumpable(kind: GeneratorKind, scheme: &'static str) -> Result<(), EnsembleError> {
    if kind.is_jumpable() {
        Ok(())
    } else {
        Err(EnsembleError::NotJumpable { kind, scheme })
    }
}

fn validate(cfg: &EnsembleConfig) -> Result<(), EnsembleError> {
    if cfg.stream_count == 0 {
        return Err(EnsembleError::NoStreams);
    }
    if cfg.per_stream_count == 0 {
        return Err(EnsembleError::NoValues);
    }
    if cfg.worker_count == 0 {
        return Err(EnsembleError::NoWorkers);
    }
    Ok(())
}

/// Jump a jumpable state forward by `steps`.
fn jump_state(state: &GeneratorState, steps: u64) -> GeneratorState {
    match state {
        GeneratorState::Lcg(s) => GeneratorState::Lcg(lcg_jump(s, steps)),
        GeneratorState::Xorshift256(s) => {
            GeneratorState::Xorshift256(build_xorshift_jump(steps).apply(s))
        }
        _ => unreachable!("jump_state is only called for jumpable kinds"),
    }
}

/// One parameterized state per stream.
///
/// Stream 0 is the kind's [`master_state`]; streams beyond it build
/// from the derived parameter table, so MWC and KISS streams differ in
/// multiplier pairs and every kind differs in seeds. Stream 0 keeps
/// the classic multiplier order (36969 driving the high lane), which
/// no table-ranked stream reproduces.
pub fn parameterize_streams(cfg: &EnsembleConfig) -> Result<Vec<GeneratorState>, EnsembleError> {
    validate(cfg)?;
    let params = param_gen::seed_streams(multiplier_table(), cfg.master_seed, cfg.stream_count)?;
    let mut states = Vec::with_capacity(params.len());
    states.push(master_state(cfg.kind, cfg.master_seed)?);
    for p in &params[1..] {
        states.push(state_from_params(cfg.kind, p)?);
    }
    Ok(states)
}

/// Initial states for sequence splitting: stream `j` starts at
/// position `j * B` of the master sequence, `B = per_stream_count`.
pub fn split_streams(cfg: &EnsembleConfig) -> Result<Vec<GeneratorState>, EnsembleError> {
    validate(cfg)?;
    require_jumpable(cfg.kind, "sequence splitting")?;
    let master = master_state(cfg.kind, cfg.master_seed)?;
    let mut states = Vec::with_capacity(cfg.stream_count as usize);
    match &master {
        GeneratorState::Lcg(lcg) => {
            for j in 0..cfg.stream_count {
                states.push(GeneratorState::Lcg(lcg_jump(lcg, j * cfg.per_stream_count)));
            }
        }
        GeneratorState::Xorshift256(xs) => {
            // One block-jump matrix, iterated: stream j+1 is stream j
            // jumped another B steps.
            let block = build_xorshift_jump(cfg.per_stream_count);
            let mut current = *xs;
            for _ in 0..cfg.stream_count {
                states.push(GeneratorState::Xorshift256(current));
                current = block.apply(&current);
            }
        }
        _ => unreachable!("require_jumpable filtered other kinds"),
    }
    Ok(states)
}

/// A leapfrog view: yields every N-th value of the master sequence.
#[derive(Debug, Clone)]
pub struct LeapfrogStream {
    state: GeneratorState,
    stride: StrideJump,
}

#[derive(Debug, Clone)]
enum StrideJump {
    Lcg { apow: u32, sum: u32 },
    Xorshift(JumpMatrix),
}

impl LeapfrogStream {
    /// Produce the next decimated value: one step for the output, then
    /// a precomputed (N-1)-step jump to skip the other streams' turns.
    pub fn next_u32(&mut self) -> u32 {
        let out = self.state.next_u32();
        match (&mut self.state, &self.stride) {
            (GeneratorState::Lcg(s), StrideJump::Lcg { apow, sum }) => {
                let x = apow
                    .wrapping_mul(s.value())
                    .wrapping_add(s.increment().wrapping_mul(*sum));
                *s = LcgState::with_params(s.multiplier(), s.increment(), x);
            }
            (GeneratorState::Xorshift256(s), StrideJump::Xorshift(m)) => {
                *s = m.apply(s);
            }
            _ => unreachable!("stride kind always matches state kind"),
        }
        out
    }

    pub fn state(&self) -> &GeneratorState {
        &self.state
    }
}

/// Leapfrog views for N = `stream_count` streams: stream `j` yields
/// `R_j, R_{j+N}, R_{j+2N}, ...` of the master sequence.
pub fn leapfrog_streams(cfg: &EnsembleConfig) -> Result<Vec<LeapfrogStream>, EnsembleError> {
    validate(cfg)?;
    require_jumpable(cfg.kind, "leapfrogging")?;
    let master = master_state(cfg.kind, cfg.master_seed)?;
    let n = cfg.stream_count;
    let stride = match &master {
        GeneratorState::Lcg(lcg) => {
            let (apow, sum) = lcg_affine(lcg.multiplier(), n - 1);
            StrideJump::Lcg { apow, sum }
        }
        GeneratorState::Xorshift256(_) => StrideJump::Xorshift(build_xorshift_jump(n - 1)),
        _ => unreachable!("require_jumpable filtered other kinds"),
    };
    let mut streams = Vec::with_capacity(n as usize);
    for j in 0..n {
        streams.push(LeapfrogStream {
            state: jump_state(&master, j),
            stride: stride.clone(),
        });
    }
    Ok(streams)
}

/// Receives each stream's finished block, in stream order.
pub trait StreamSink {
    fn accept(&mut self, stream_index: usize, values: &[u32]) -> std::io::Result<()>;
}

/// Collects everything into one stream-major buffer.
#[derive(Debug, Default)]
pub struct VecSink {
    pub values: Vec<u32>,
}

impl StreamSink for VecSink {
    fn accept(&mut self, _stream_index: usize, values: &[u32]) -> std::io::Result<()> {
        self.values.extend_from_slice(values);
        Ok(())
    }
}

/// Drops the values; useful when only digests and final states matter.
#[derive(Debug, Default)]
pub struct NullSink;

impl StreamSink for NullSink {
    fn accept(&mut self, _stream_index: usize, _values: &[u32]) -> std::io::Result<()> {
        Ok(())
    }
}

/// Order-sensitive 64-bit digest of a word sequence (FNV-1a over
/// 32-bit words).
pub fn sequence_digest(values: &[u32]) -> u64 {
    let mut d = 0xcbf2_9ce4_8422_2325u64;
    for &v in values {
        d ^= u64::from(v);
        d = d.wrapping_mul(0x0000_0100_0000_01b3);
    }
    d
}

/// What an ensemble run produced, values aside.
#[derive(Debug)]
pub struct EnsembleSummary {
    pub stream_count: u64,
    pub per_stream_count: u64,
    /// Digest of each stream's block, in stream order.
    pub digests: Vec<u64>,
    /// Final states, for continuing the streams later.
    pub final_states: Vec<GeneratorState>,
}

/// Run every stream to completion and hand each block to the sink in
/// stream-major order.
///
/// Streams are the unit of parallelism: each one is generated into its
/// own pre-sized region, so the output is bit-identical for any
/// `worker_count`. The sink runs after generation, sequentially.
pub fn generate_ensemble(
    cfg: &EnsembleConfig,
    sink: &mut dyn StreamSink,
) -> Result<EnsembleSummary, EnsembleError> {
    validate(cfg)?;
    let per_stream = cfg.per_stream_count as usize;
    let mut cursors: Vec<Cursor> = match cfg.scheme {
        Scheme::Parameterize => parameterize_streams(cfg)?
            .into_iter()
            .map(Cursor::Plain)
            .collect(),
        Scheme::Split => split_streams(cfg)?.into_iter().map(Cursor::Plain).collect(),
        Scheme::Leapfrog => leapfrog_streams(cfg)?
            .into_iter()
            .map(Cursor::Leap)
            .collect(),
    };

    let mut buffer = vec![0u32; cursors.len() * per_stream];
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.worker_count)
        .build()
        .map_err(|e| EnsembleError::Pool(e.to_string()))?;
    pool.install(|| {
        buffer
            .par_chunks_mut(per_stream)
            .zip(cursors.par_iter_mut())
            .for_each(|(chunk, cursor)| match cursor {
                Cursor::Plain(state) => state.fill(chunk),
                Cursor::Leap(stream) => {
                    for slot in chunk {
                        *slot = stream.next_u32();
                    }
                }
            });
    });

    let mut digests = Vec::with_capacity(cursors.len());
    for (index, chunk) in buffer.chunks(per_stream).enumerate() {
        digests.push(sequence_digest(chunk));
        sink.accept(index, chunk)
            .map_err(|source| EnsembleError::Sink {
                stream: index,
                source,
            })?;
    }
    Ok(EnsembleSummary {
        stream_count: cfg.stream_count,
        per_stream_count: cfg.per_stream_count,
        digests,
        final_states: cursors.into_iter().map(Cursor::into_state).collect(),
    })
}

#[derive(Debug, Clone)]
enum Cursor {
    Plain(GeneratorState),
    Leap(LeapfrogStream),
}

impl Cursor {
    fn into_state(self) -> GeneratorState {
        match self {
            Cursor::Plain(s) => s,
            Cursor::Leap(s) => s.state,
        }
    }
}
