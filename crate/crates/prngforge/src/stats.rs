//! Desk-scale statistical quality battery.
//!
//! Five tests with p-value reporting: bit frequency (monobit), byte
//! chi-square, bit runs, lagged serial correlation, and birthday
//! spacings. Each test reports a p-value in [0, 1] and a verdict:
//!
//! - `fail` when the p-value falls outside `[10^-3, 1 - 10^-3]`,
//! - `suspect` when it falls outside `[10^-2, 1 - 10^-2]`,
//! - `pass` otherwise.
//!
//! The z-based tests report the one-sided position `Phi(z)`, so both
//! tails of the statistic land in the failing bands. The chi-square
//! tests report the upper-tail probability; their "too uniform" side
//! (p near 1, chi-square near 0) indicates structure rather than bias
//! and is capped at `suspect`.
//!
//! Tests are pure over their input buffer. The battery is deterministic
//! given `(source, master_seed, n, level)`.

use crate::rng_core::GeneratorKind;
use crate::streams;
use thiserror::Error;

mod sf;

pub const ALPHA_FAIL: f64 = 1e-3;
pub const ALPHA_SUSPECT: f64 = 1e-2;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StatsError {
    #[error("{test} needs at least {needed} samples, got {got}")]
    TooFewSamples {
        test: &'static str,
        needed: usize,
        got: usize,
    },
    #[error("lag {lag} out of range (1..=64 and below the sample count)")]
    LagOutOfRange { lag: usize },
    #[error("birthday parameters m={m}, bits={bits} give lambda={lambda} outside [0.1, 20]")]
    UninformativeLambda { m: usize, bits: u32, lambda: f64 },
    #[error("birthday parameters out of range: m must be in 2..=4096 and bits in 1..=30")]
    BirthdayParamsOutOfRange,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Suspect,
    Fail,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Suspect => "suspect",
            Verdict::Fail => "fail",
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Result of one battery test.
#[derive(Debug, Clone, PartialEq)]
pub struct TestResult {
    pub test_name: String,
    pub n_samples: usize,
    pub statistic: f64,
    pub p_value: f64,
    pub verdict: Verdict,
    /// Set when the verdict comes from a degenerate input rather than
    /// the p-value (zero variance, all-equal bits).
    pub note: Option<String>,
}

impl TestResult {
    fn new(
        test_name: &str,
        n_samples: usize,
        statistic: f64,
        p_value: f64,
        verdict: Verdict,
    ) -> Self {
        TestResult {
            test_name: test_name.to_string(),
            n_samples,
            statistic,
            p_value,
            verdict,
            note: None,
        }
    }
}

/// Both tails of the p-value are failing territory.
fn two_sided_verdict(p: f64) -> Verdict {
    if !(ALPHA_FAIL..=1.0 - ALPHA_FAIL).contains(&p) {
        Verdict::Fail
    } else if !(ALPHA_SUSPECT..=1.0 - ALPHA_SUSPECT).contains(&p) {
        Verdict::Suspect
    } else {
        Verdict::Pass
    }
}

/// Upper-tail chi-square p-value: the low side fails, the "too
/// uniform" side (statistic near zero) is capped at suspect.
fn structure_capped_verdict(p: f64) -> Verdict {
    if p < ALPHA_FAIL {
        Verdict::Fail
    } else if !(ALPHA_SUSPECT..=1.0 - ALPHA_SUSPECT).contains(&p) {
        Verdict::Suspect
    } else {
        Verdict::Pass
    }
}

fn require_samples(test: &'static str, needed: usize, got: usize) -> Result<(), StatsError> {
    if got < needed {
        Err(StatsError::TooFewSamples { test, needed, got })
    } else {
        Ok(())
    }
}

/// Bit-frequency test: the total ones count across all 32n bits,
/// z-scored against the fair-coin expectation.
pub fn monobit(samples: &[u32]) -> Result<TestResult, StatsError> {
    require_samples("monobit", 10_000, samples.len())?;
    let total_bits = samples.len() as f64 * 32.0;
    let ones: u64 = samples.iter().map(|w| u64::from(w.count_ones())).sum();
    let z = (2.0 * ones as f64 - total_bits) / total_bits.sqrt();
    let p = sf::normal_cdf(z);
    Ok(TestResult::new(
        "monobit",
        samples.len(),
        z,
        p,
        two_sided_verdict(p),
    ))
}

/// Chi-square over the 256 byte values of the little-endian word
/// stream.
pub fn chi2_bytes(samples: &[u32]) -> Result<TestResult, StatsError> {
    require_samples("chi2_bytes", 100_000, samples.len())?;
    let mut counts = [0u64; 256];
    for &w in samples {
        for b in w.to_le_bytes() {
            counts[b as usize] += 1;
        }
    }
    let expected = samples.len() as f64 * 4.0 / 256.0;
    let chi2: f64 = counts
        .iter()
        .map(|&c| {
            let d = c as f64 - expected;
            d * d / expected
        })
        .sum();
    let p = sf::chi2_sf(chi2, 255.0);
    Ok(TestResult::new(
        "chi2_bytes",
        samples.len(),
        chi2,
        p,
        structure_capped_verdict(p),
    ))
}

/// Bit-runs test, conditioned on the observed ones count.
///
/// Bits are ordered LSB-first within each word. The runs count is
/// z-scored against the Wald-Wolfowitz expectation; inputs whose bit
/// frequency is already broken (including all-equal inputs) fail
/// directly, since the normal approximation is meaningless there.
pub fn runs_test(samples: &[u32]) -> Result<TestResult, StatsError> {
    require_samples("runs", 10_000, samples.len())?;
    let n = samples.len() as f64 * 32.0;
    let ones: u64 = samples.iter().map(|w| u64::from(w.count_ones())).sum();
    let pi = ones as f64 / n;

    let result = |statistic: f64, p: f64, verdict: Verdict, note: Option<&str>| TestResult {
        test_name: "runs".to_string(),
        n_samples: samples.len(),
        statistic,
        p_value: p,
        verdict,
        note: note.map(str::to_string),
    };

    if (pi - 0.5).abs() >= 2.0 / n.sqrt() {
        // Frequency prerequisite failed; the all-zero and all-one
        // degenerate inputs land here.
        return Ok(result(
            pi,
            0.0,
            Verdict::Fail,
            Some("bit frequency prerequisite failed"),
        ));
    }

    // Transitions between adjacent bits: within words via w ^ (w >> 1),
    // across the boundary via msb(w[i]) vs lsb(w[i+1]).
    let mut transitions: u64 = 0;
    for &w in samples {
        transitions += u64::from(((w ^ (w >> 1)) & 0x7FFF_FFFF).count_ones());
    }
    for pair in samples.windows(2) {
        transitions += u64::from((pair[0] >> 31) ^ (pair[1] & 1));
    }
    let runs = transitions as f64 + 1.0;

    let n1 = ones as f64;
    let n0 = n - n1;
    let expected = 1.0 + 2.0 * n1 * n0 / n;
    let variance = 2.0 * n1 * n0 * (2.0 * n1 * n0 - n) / (n * n * (n - 1.0));
    let z = (runs - expected) / variance.sqrt();
    let p = sf::normal_cdf(z);
    Ok(result(z, p, two_sided_verdict(p), None))
}

/// Pearson correlation between the word sequence and its lagged self,
/// z-scored as `r * sqrt(n)`.
pub fn serial_correlation(samples: &[u32], lag: usize) -> Result<TestResult, StatsError> {
    require_samples("serial_correlation", 10_000, samples.len())?;
    if lag == 0 || lag > 64 || lag >= samples.len() {
        return Err(StatsError::LagOutOfRange { lag });
    }
    let name = format!("serial_correlation_lag{lag}");
    let n = samples.len() - lag;

    // Integer moments first: f64 accumulation would lose low bits long
    // before 10^8 samples.
    let mut sum_a = 0u64;
    let mut sum_b = 0u64;
    let mut sum_aa = 0u128;
    let mut sum_bb = 0u128;
    let mut sum_ab = 0u128;
    for i in 0..n {
        let a = u64::from(samples[i]);
        let b = u64::from(samples[i + lag]);
        sum_a += a;
        sum_b += b;
        sum_aa += u128::from(a * a);
        sum_bb += u128::from(b * b);
        sum_ab += u128::from(a * b);
    }
    let nf = n as f64;
    let mean_a = sum_a as f64 / nf;
    let mean_b = sum_b as f64 / nf;
    let cov = sum_ab as f64 / nf - mean_a * mean_b;
    let var_a = sum_aa as f64 / nf - mean_a * mean_a;
    let var_b = sum_bb as f64 / nf - mean_b * mean_b;

    if var_a <= 0.0 || var_b <= 0.0 {
        return Ok(TestResult {
            test_name: name,
            n_samples: samples.len(),
            statistic: f64::NAN,
            p_value: 0.0,
            verdict: Verdict::Fail,
            note: Some("zero variance: correlation undefined".to_string()),
        });
    }

    let r = cov / (var_a * var_b).sqrt();
    let z = r * nf.sqrt();
    let p = sf::normal_cdf(z);
    Ok(TestResult::new(
        &name,
        samples.len(),
        r,
        p,
        two_sided_verdict(p),
    ))
}

/// Birthday-spacings test (small-m variant).
///
/// Each trial draws `m` birthdays from the top `bits` bits of `m`
/// words, sorts them, and counts duplicate values among the sorted
/// spacings. Under randomness the duplicate count is asymptotically
/// Poisson with `lambda = m^3 / 2^(bits+2)`; the observed counts are
/// compared to that law with a chi-square goodness-of-fit over binned
/// counts.
pub fn birthday_spacings(samples: &[u32], m: usize, bits: u32) -> Result<TestResult, StatsError> {
    if !(2..=4096).contains(&m) || !(1..=30).contains(&bits) {
        return Err(StatsError::BirthdayParamsOutOfRange);
    }
    let lambda = birthday_lambda(m, bits);
    if !(0.1..=20.0).contains(&lambda) {
        return Err(StatsError::UninformativeLambda { m, bits, lambda });
    }
    let trials = samples.len() / m;
    if trials < 200 {
        return Err(StatsError::TooFewSamples {
            test: "birthday_spacings",
            needed: 200 * m,
            got: samples.len(),
        });
    }

    // Histogram of duplicate counts across trials.
    let mut histogram = vec![0u64; 64];
    let mut birthdays = vec![0u32; m];
    let mut spacings = vec![0u32; m - 1];
    for trial in samples.chunks_exact(m).take(trials) {
        for (b, &w) in birthdays.iter_mut().zip(trial) {
            *b = w >> (32 - bits);
        }
        birthdays.sort_unstable();
        for (s, pair) in spacings.iter_mut().zip(birthdays.windows(2)) {
            *s = pair[1] - pair[0];
        }
        spacings.sort_unstable();
        let duplicates = spacings.windows(2).filter(|p| p[0] == p[1]).count();
        let slot = duplicates.min(histogram.len() - 1);
        histogram[slot] += 1;
    }

    // Bin the Poisson law so every expected count is at least 5, then
    // chi-square against it.
    let mut bins: Vec<(f64, u64)> = Vec::new(); // (expected, observed)
    let mut acc_expected = 0.0;
    let mut acc_observed = 0u64;
    let mut cumulative = 0.0f64;
    for (k, &observed) in histogram.iter().enumerate() {
        let pk = if k == histogram.len() - 1 {
            (1.0 - cumulative).max(0.0)
        } else {
            let p = sf::poisson_pmf(lambda, k as u64);
            cumulative += p;
            p
        };
        acc_expected += pk * trials as f64;
        acc_observed += observed;
        if acc_expected >= 5.0 {
            bins.push((acc_expected, acc_observed));
            acc_expected = 0.0;
            acc_observed = 0;
        }
    }
    if acc_expected > 0.0 || acc_observed > 0 {
        match bins.last_mut() {
            Some(last) => {
                last.0 += acc_expected;
                last.1 += acc_observed;
            }
            None => bins.push((acc_expected, acc_observed)),
        }
    }

    let chi2: f64 = bins
        .iter()
        .map(|&(e, o)| {
            let d = o as f64 - e;
            d * d / e
        })
        .sum();
    let df = (bins.len().max(2) - 1) as f64;
    let p = sf::chi2_sf(chi2, df);
    Ok(TestResult::new(
        "birthday_spacings",
        trials * m,
        chi2,
        p,
        structure_capped_verdict(p),
    ))
}

/// `lambda = m^3 / 2^(bits + 2)`.
pub fn birthday_lambda(m: usize, bits: u32) -> f64 {
    (m as f64).powi(3) / (2f64).powi(bits as i32 + 2)
}

/// What feeds the battery: a real generator or the deliberately broken
/// counter used to prove the battery detects structure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleSource {
    Generator(GeneratorKind),
    /// Words 0, 1, 2, ...: a low-order-bit counter.
    Counter,
}

impl SampleSource {
    pub fn name(self) -> String {
        match self {
            SampleSource::Generator(kind) => kind.name().to_string(),
            SampleSource::Counter => "_counter".to_string(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BatteryLevel {
    Quick,
    Full,
}

impl BatteryLevel {
    pub fn name(self) -> &'static str {
        match self {
            BatteryLevel::Quick => "quick",
            BatteryLevel::Full => "full",
        }
    }

    /// Minimum word count accepted at this level.
    pub fn min_samples(self) -> usize {
        match self {
            BatteryLevel::Quick => 1_000_000,
            BatteryLevel::Full => 100_000_000,
        }
    }

    fn birthday_trials(self) -> usize {
        match self {
            BatteryLevel::Quick => 200,
            BatteryLevel::Full => 1_000,
        }
    }
}

/// Generate the battery's input words for a source.
pub fn generate_words(source: SampleSource, master_seed: u64, n: usize) -> Vec<u32> {
    match source {
        SampleSource::Generator(kind) => {
            let mut state =
                streams::master_state(kind, master_seed).expect("every kind yields a master state");
            let mut words = vec![0u32; n];
            state.fill(&mut words);
            words
        }
        SampleSource::Counter => (0..n).map(|i| i as u32).collect(),
    }
}

/// Full battery run.
#[derive(Debug, Clone)]
pub struct BatteryReport {
    pub source: SampleSource,
    pub level: BatteryLevel,
    pub master_seed: u64,
    pub n_samples: usize,
    pub results: Vec<TestResult>,
}

impl BatteryReport {
    pub fn failures(&self) -> usize {
        self.results
            .iter()
            .filter(|r| r.verdict == Verdict::Fail)
            .count()
    }

    pub fn suspects(&self) -> usize {
        self.results
            .iter()
            .filter(|r| r.verdict == Verdict::Suspect)
            .count()
    }

    pub fn passed(&self) -> bool {
        self.failures() == 0
    }

    /// One line per test (`test_name p_value verdict`) plus a summary.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for r in &self.results {
            out.push_str(&format!("{} {:.6} {}", r.test_name, r.p_value, r.verdict));
            if let Some(note) = &r.note {
                out.push_str(&format!(" ({note})"));
            }
            out.push('\n');
        }
        out.push_str(&format!(
            "summary: {} {} battery on {} samples: {} failures, {} suspects ({})\n",
            self.source.name(),
            self.level.name(),
            self.n_samples,
            self.failures(),
            self.suspects(),
            if self.passed() { "pass" } else { "fail" },
        ));
        out
    }

    pub const CSV_HEADER: &'static str = "test_name,n_samples,statistic,p_value,verdict";

    /// Machine-readable rows in the same comma-separated shape the
    /// bench reports use.
    pub fn render_csv(&self) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        for r in &self.results {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                r.test_name, r.n_samples, r.statistic, r.p_value, r.verdict
            ));
        }
        out
    }
}

/// Run every test over `n` words from the source.
pub fn run_battery(
    source: SampleSource,
    master_seed: u64,
    n: usize,
    level: BatteryLevel,
) -> Result<BatteryReport, StatsError> {
    if n < level.min_samples() {
        return Err(StatsError::TooFewSamples {
            test: "battery",
            needed: level.min_samples(),
            got: n,
        });
    }
    let words = generate_words(source, master_seed, n);
    let birthday_words = &words[..level.birthday_trials() * 512];
    let results = vec![
        monobit(&words)?,
        chi2_bytes(&words)?,
        runs_test(&words)?,
        serial_correlation(&words, 1)?,
        birthday_spacings(birthday_words, 512, 25)?,
    ];
    Ok(BatteryReport {
        source,
        level,
        master_seed,
        n_samples: n,
        results,
    })
}
