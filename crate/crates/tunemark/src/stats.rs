//! Exact contingency-table statistics.
//!
//! The verification table counts manipulated/correct responses over the
//! trigger and reference sets. Watermark presence is decided by Fisher's
//! exact test on that table. All tail sums are computed in exact big-integer
//! arithmetic — point probabilities with the margins fixed share the
//! denominator C(n, c1), so tables can be ranked and summed by their integer
//! numerators C(r1, k)·C(r2, c1-k) with no rounding at all. The only floating
//! point step is the final conversion to `f64`, which keeps far more than the
//! twelve significant digits the verifier relies on, even for p-values near
//! 1e-60.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::StatsError;

/// Default rejection threshold for the null hypothesis ("no association
/// between set membership and response"). Deliberately tiny so the false
/// positive rate of ownership claims is negligible.
pub const DEFAULT_ALPHA: f64 = 1e-8;

/// How a single oracle response was classified.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResponseClass {
    /// Matched the manipulated output label.
    Manipulated,
    /// Matched the correct output label.
    Correct,
    /// Matched neither; excluded from the 2x2 table but always reported.
    Other,
}

/// Response counts over the verification trigger and reference sets.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationTable {
    /// Manipulated responses on the trigger set.
    pub n_t_m: u64,
    /// Correct responses on the trigger set.
    pub n_t_c: u64,
    /// Manipulated responses on the reference set.
    pub n_r_m: u64,
    /// Correct responses on the reference set.
    pub n_r_c: u64,
    /// Unclassifiable responses on the trigger set.
    pub excluded_t: u64,
    /// Unclassifiable responses on the reference set.
    pub excluded_r: u64,
}

impl VerificationTable {
    /// A table with no exclusions, cells in row-major order.
    pub fn from_counts(n_t_m: u64, n_t_c: u64, n_r_m: u64, n_r_c: u64) -> Self {
        Self {
            n_t_m,
            n_t_c,
            n_r_m,
            n_r_c,
            excluded_t: 0,
            excluded_r: 0,
        }
    }

    /// Tally classified responses from both sets.
    pub fn from_classifications(trigger: &[ResponseClass], reference: &[ResponseClass]) -> Self {
        let mut t = Self::default();
        for class in trigger {
            match class {
                ResponseClass::Manipulated => t.n_t_m += 1,
                ResponseClass::Correct => t.n_t_c += 1,
                ResponseClass::Other => t.excluded_t += 1,
            }
        }
        for class in reference {
            match class {
                ResponseClass::Manipulated => t.n_r_m += 1,
                ResponseClass::Correct => t.n_r_c += 1,
                ResponseClass::Other => t.excluded_r += 1,
            }
        }
        t
    }

    /// Queried prompts on the trigger set, exclusions included.
    pub fn trigger_total(&self) -> u64 {
        self.n_t_m + self.n_t_c + self.excluded_t
    }

    /// Queried prompts on the reference set, exclusions included.
    pub fn reference_total(&self) -> u64 {
        self.n_r_m + self.n_r_c + self.excluded_r
    }

    /// Counted (non-excluded) responses per set.
    pub fn counted(&self) -> (u64, u64) {
        (self.n_t_m + self.n_t_c, self.n_r_m + self.n_r_c)
    }

    /// The four cells in row-major order.
    pub fn cells(&self) -> [u64; 4] {
        [self.n_t_m, self.n_t_c, self.n_r_m, self.n_r_c]
    }
}

/// Which tail(s) of the hypergeometric distribution the p-value sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sidedness {
    /// Minimum-likelihood two-sided test: sums every table (margins fixed)
    /// whose point probability does not exceed the observed one. This is the
    /// documented default; it reproduces the reference p-values.
    TwoSided,
    /// Upper tail on the trigger-manipulated cell.
    OneSidedGreater,
}

impl std::fmt::Display for Sidedness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::TwoSided => f.write_str("two-sided"),
            Self::OneSidedGreater => f.write_str("greater"),
        }
    }
}

impl std::str::FromStr for Sidedness {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "two-sided" | "twosided" | "two" => Ok(Self::TwoSided),
            "greater" | "one-sided-greater" | "one-sided" => Ok(Self::OneSidedGreater),
            other => Err(format!(
                "unknown sidedness {other:?} (expected two-sided or greater)"
            )),
        }
    }
}

/// Outcome of the exact test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FisherResult {
    pub p_value: f64,
    pub sidedness: Sidedness,
    pub alpha: f64,
    /// True iff `p_value < alpha`.
    pub reject: bool,
    /// Set when a margin was zero: only one table is possible, p is 1 by
    /// definition and the test carries no information.
    pub degenerate: bool,
}

/// Fisher's exact test at the default threshold.
pub fn fisher_exact(table: &VerificationTable, sidedness: Sidedness) -> FisherResult {
    fisher_exact_at(table, sidedness, DEFAULT_ALPHA)
}

/// Fisher's exact test at a caller-chosen threshold.
pub fn fisher_exact_at(
    table: &VerificationTable,
    sidedness: Sidedness,
    alpha: f64,
) -> FisherResult {
    let [a, b, c, d] = table.cells();
    let (r1, r2) = (a + b, c + d);
    let (c1, c2) = (a + c, b + d);
    if r1 == 0 || r2 == 0 || c1 == 0 || c2 == 0 {
        return FisherResult {
            p_value: 1.0,
            sidedness,
            alpha,
            reject: false,
            degenerate: true,
        };
    }
    let lo = c1.saturating_sub(r2);
    let hi = c1.min(r1);
    // Integer weights: weight(k) = C(r1,k)·C(r2,c1-k); P(k) = weight(k)/C(n,c1).
    let weights: Vec<BigInt> = (lo..=hi)
        .map(|k| binomial(r1, k) * binomial(r2, c1 - k))
        .collect();
    let denom = binomial(r1 + r2, c1);
    debug_assert_eq!(weights.iter().sum::<BigInt>(), denom);
    let observed = &weights[(a - lo) as usize];
    let tail: BigInt = match sidedness {
        Sidedness::TwoSided => weights.iter().filter(|w| *w <= observed).sum(),
        Sidedness::OneSidedGreater => weights.iter().skip((a - lo) as usize).sum(),
    };
    let p = big_ratio_to_f64(&tail, &denom).clamp(f64::MIN_POSITIVE, 1.0);
    FisherResult {
        p_value: p,
        sidedness,
        alpha,
        reject: p < alpha,
        degenerate: false,
    }
}

/// Exact binomial coefficient.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut c = BigInt::one();
    for i in 0..k {
        c = c * (n - i) / (i + 1);
    }
    c
}

/// Convert an exact ratio `num/den` with `0 < num <= den` to f64, keeping
/// full double precision regardless of magnitude.
fn big_ratio_to_f64(num: &BigInt, den: &BigInt) -> f64 {
    if num == den {
        return 1.0;
    }
    let shift = den.bits() - num.bits() + 64;
    let scaled: BigInt = (num << shift) / den;
    let mantissa = scaled.to_f64().unwrap_or(f64::MAX);
    // p = mantissa · 2^-shift, split so the intermediate cannot underflow.
    let half = (shift / 2) as i32;
    mantissa * 2f64.powi(-half) * 2f64.powi(-(shift as i32 - half))
}

/// Black-box estimate of the probability that the oracle emits the target
/// label, taken as its frequency among classifiable responses.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OutputProbability {
    pub probability: f64,
    /// Responses that matched one of the two labels.
    pub counted: usize,
    /// Responses classified as other and left out of the estimate.
    pub excluded: usize,
}

pub fn estimate_output_probability(
    responses: &[ResponseClass],
    target: ResponseClass,
) -> Result<OutputProbability, StatsError> {
    if responses.is_empty() {
        return Err(StatsError::NoResponses);
    }
    let excluded = responses
        .iter()
        .filter(|r| matches!(r, ResponseClass::Other))
        .count();
    let counted = responses.len() - excluded;
    if counted == 0 {
        return Err(StatsError::AllExcluded);
    }
    let hits = responses.iter().filter(|r| **r == target).count();
    Ok(OutputProbability {
        probability: hits as f64 / counted as f64,
        counted,
        excluded,
    })
}

/// Probability of guessing both the trigger word and the decoration blind
/// from a vocabulary of `vocab_size` candidates: (1/N)^2.
pub fn guess_probability(vocab_size: u64) -> Result<f64, StatsError> {
    if vocab_size == 0 {
        return Err(StatsError::ZeroVocabulary);
    }
    Ok((1.0 / vocab_size as f64).powi(2))
}

/// Mean and population standard deviation of one table cell across runs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CellSummary {
    pub mean: f64,
    /// Population (divide-by-n) standard deviation.
    pub std_dev: f64,
}

/// Per-cell summary over repeated verification runs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub runs: usize,
    pub n_t_m: CellSummary,
    pub n_t_c: CellSummary,
    pub n_r_m: CellSummary,
    pub n_r_c: CellSummary,
}

/// Summarize repeated runs of the same verification setup. All tables must
/// agree on their per-set totals (exclusions included).
pub fn summarize_runs(tables: &[VerificationTable]) -> Result<RunSummary, StatsError> {
    if tables.len() < 2 {
        return Err(StatsError::TooFewTables(tables.len()));
    }
    let expected_t = tables[0].trigger_total();
    let expected_r = tables[0].reference_total();
    for (index, t) in tables.iter().enumerate() {
        if t.trigger_total() != expected_t || t.reference_total() != expected_r {
            return Err(StatsError::MismatchedN {
                index,
                expected_t,
                expected_r,
                got_t: t.trigger_total(),
                got_r: t.reference_total(),
            });
        }
    }
    let cell = |pick: fn(&VerificationTable) -> u64| -> CellSummary {
        let values: Vec<f64> = tables.iter().map(|t| pick(t) as f64).collect();
        let mean = values.iter().sum::<f64>() / values.len() as f64;
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / values.len() as f64;
        CellSummary {
            mean,
            std_dev: var.sqrt(),
        }
    };
    Ok(RunSummary {
        runs: tables.len(),
        n_t_m: cell(|t| t.n_t_m),
        n_t_c: cell(|t| t.n_t_c),
        n_r_m: cell(|t| t.n_r_m),
        n_r_c: cell(|t| t.n_r_c),
    })
}

/// JSON-facing report for one exact test. The p-value is carried as a string
/// so serialization preserves its full precision.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FisherReport {
    pub table: [[u64; 2]; 2],
    pub p_value: String,
    pub sidedness: Sidedness,
    pub alpha: f64,
    pub reject: bool,
    pub degenerate: bool,
    pub excluded: [u64; 2],
}

impl FisherReport {
    pub fn new(table: &VerificationTable, fisher: &FisherResult) -> Self {
        Self {
            table: [[table.n_t_m, table.n_t_c], [table.n_r_m, table.n_r_c]],
            p_value: format!("{:e}", fisher.p_value),
            sidedness: fisher.sidedness,
            alpha: fisher.alpha,
            reject: fisher.reject,
            degenerate: fisher.degenerate,
            excluded: [table.excluded_t, table.excluded_r],
        }
    }

    pub fn p(&self) -> f64 {
        self.p_value.parse().unwrap_or(f64::NAN)
    }
}
