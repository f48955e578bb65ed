//! Black-box verification pipeline.
//!
//! Renders verification prompts, queries a text-in/text-out oracle once per
//! prompt, classifies responses by their first token, assembles the
//! verification table and issues a [`Verdict`]. Only completion text is ever
//! consumed; no logprobs or token-level access.

use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::Mutex;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::dataset::{self, SampleRole};
use crate::error::{OracleError, PipelineError};
use crate::seeding::{derive_rng, derive_seed};
use crate::stats::{fisher_exact_at, FisherResult, ResponseClass, Sidedness, VerificationTable};
use crate::watermark::{validate_mix, WatermarkSpec};

/// Minimal contract for an inference endpoint: one prompt in, one completion
/// out. Implementations must be safe to query from several threads.
pub trait InferenceOracle: Send + Sync {
    fn complete(&self, prompt: &str) -> Result<String, OracleError>;
}

/// Adapter for closures, mostly for tests and examples.
pub struct FnOracle<F>(pub F);

impl<F> InferenceOracle for FnOracle<F>
where
    F: Fn(&str) -> Result<String, OracleError> + Send + Sync,
{
    fn complete(&self, prompt: &str) -> Result<String, OracleError> {
        (self.0)(prompt)
    }
}

/// First alphanumeric word of a string, lowercased. Used both to normalize
/// the expected labels and to classify responses, so "Yes." and "yes," agree.
pub fn normalize_label(text: &str) -> String {
    match text.find(|c: char| c.is_alphanumeric()) {
        None => String::new(),
        Some(start) => text[start..]
            .chars()
            .take_while(|c| c.is_alphanumeric())
            .collect::<String>()
            .to_lowercase(),
    }
}

/// Classify a completion against the two output labels by its first token.
/// Case and surrounding punctuation are ignored; anything that matches
/// neither label is `Other`.
pub fn classify_response(
    text: &str,
    output_manipulated: &str,
    output_correct: &str,
) -> ResponseClass {
    let word = normalize_label(text);
    if word.is_empty() {
        return ResponseClass::Other;
    }
    if word == normalize_label(output_manipulated) {
        ResponseClass::Manipulated
    } else if word == normalize_label(output_correct) {
        ResponseClass::Correct
    } else {
        ResponseClass::Other
    }
}

/// Pipeline tuning. Queries are deterministic regardless of concurrency:
/// aggregation is keyed by prompt index, never by arrival order.
#[derive(Debug, Clone)]
pub struct PipelineConfig {
    /// Maximum in-flight oracle queries.
    pub concurrency: usize,
    /// Fraction of unclassifiable responses above which the verdict becomes
    /// inconclusive rather than trusting the table.
    pub exclusion_limit: f64,
    pub sidedness: Sidedness,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            concurrency: 8,
            exclusion_limit: 0.2,
            sidedness: Sidedness::TwoSided,
        }
    }
}

/// Final ownership call for one watermark.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Decision {
    Verified,
    NotVerified,
    Inconclusive,
}

/// Everything the verifier concluded about one watermark.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub watermark_id: String,
    pub table: VerificationTable,
    pub fisher: FisherResult,
    /// |rate(manipulated | trigger) - rate(manipulated | reference)| over the
    /// counted responses.
    pub separation: f64,
    pub decision: Decision,
    /// Verification subjects could not be kept disjoint from training.
    pub subject_overlap_possible: bool,
}

/// One audited oracle exchange.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TranscriptEntry {
    pub index: usize,
    pub set: SampleRole,
    pub prompt: String,
    pub response: String,
    pub class: ResponseClass,
}

/// Run black-box verification of one watermark at the default configuration.
pub fn run_verification(
    spec: &WatermarkSpec,
    oracle: &dyn InferenceOracle,
    n: usize,
    seed: u64,
    alpha: f64,
) -> Result<Verdict, PipelineError> {
    run_verification_with(spec, oracle, n, seed, alpha, &PipelineConfig::default())
        .map(|(verdict, _)| verdict)
}

/// Run verification and keep the per-prompt transcript for audit.
pub fn run_verification_with(
    spec: &WatermarkSpec,
    oracle: &dyn InferenceOracle,
    n: usize,
    seed: u64,
    alpha: f64,
    config: &PipelineConfig,
) -> Result<(Verdict, Vec<TranscriptEntry>), PipelineError> {
    let sets = dataset::build_verification_sets(spec, n, seed)?;
    // Interleave trigger and reference queries in seeded random order so an
    // order-sensitive oracle cannot tell the sets apart.
    let mut jobs: Vec<(usize, SampleRole, String)> = Vec::with_capacity(2 * n);
    for (i, sample) in sets.trigger.iter().enumerate() {
        jobs.push((i, SampleRole::Trigger, dataset::render_prompt(sample)));
    }
    for (i, sample) in sets.reference.iter().enumerate() {
        jobs.push((n + i, SampleRole::Reference, dataset::render_prompt(sample)));
    }
    let mut order: Vec<usize> = (0..jobs.len()).collect();
    order.shuffle(&mut derive_rng(seed, &format!("query-order/{}", spec.id)));

    let outcomes = query_all(oracle, &jobs, &order, config.concurrency.max(1));

    let mut transcript: Vec<TranscriptEntry> = Vec::with_capacity(jobs.len());
    let mut failure: Option<OracleError> = None;
    let mut trigger_classes = Vec::with_capacity(n);
    let mut reference_classes = Vec::with_capacity(n);
    for ((index, set, prompt), outcome) in jobs.into_iter().zip(outcomes) {
        match outcome {
            Some(Ok(response)) => {
                let class =
                    classify_response(&response, &spec.output_manipulated, &spec.output_correct);
                match set {
                    SampleRole::Trigger => trigger_classes.push(class),
                    SampleRole::Reference => reference_classes.push(class),
                    SampleRole::Clean => {}
                }
                transcript.push(TranscriptEntry {
                    index,
                    set,
                    prompt,
                    response,
                    class,
                });
            }
            Some(Err(e)) if failure.is_none() => failure = Some(e),
            Some(Err(_)) | None => {}
        }
    }
    let table = VerificationTable::from_classifications(&trigger_classes, &reference_classes);
    if let Some(source) = failure {
        let completed = trigger_classes.len() + reference_classes.len();
        return Err(PipelineError::OracleFailure {
            source,
            partial: table,
            completed,
            total: 2 * n,
        });
    }

    let fisher = fisher_exact_at(&table, config.sidedness, alpha);
    let (counted_t, counted_r) = table.counted();
    let separation = if counted_t == 0 || counted_r == 0 {
        0.0
    } else {
        (table.n_t_m as f64 / counted_t as f64 - table.n_r_m as f64 / counted_r as f64).abs()
    };
    let excluded_fraction = (table.excluded_t + table.excluded_r) as f64 / (2 * n) as f64;
    let decision = if excluded_fraction > config.exclusion_limit {
        Decision::Inconclusive
    } else if fisher.reject {
        Decision::Verified
    } else {
        Decision::NotVerified
    };
    let verdict = Verdict {
        watermark_id: spec.id.clone(),
        table,
        fisher,
        separation,
        decision,
        subject_overlap_possible: sets.subject_overlap_possible,
    };
    Ok((verdict, transcript))
}

/// Issue queries in `order`, at most `concurrency` in flight. Returns one
/// slot per job, indexed like `jobs`; slots are `None` when a prior failure
/// stopped the run before that query was issued.
fn query_all(
    oracle: &dyn InferenceOracle,
    jobs: &[(usize, SampleRole, String)],
    order: &[usize],
    concurrency: usize,
) -> Vec<Option<Result<String, OracleError>>> {
    let mut outcomes: Vec<Option<Result<String, OracleError>>> = Vec::new();
    outcomes.resize_with(jobs.len(), || None);
    if concurrency <= 1 {
        for &slot in order {
            let result = oracle.complete(&jobs[slot].2);
            let failed = result.is_err();
            outcomes[slot] = Some(result);
            if failed {
                break;
            }
        }
        return outcomes;
    }

    let next = AtomicUsize::new(0);
    let stop = AtomicBool::new(false);
    let collected: Mutex<Vec<(usize, Result<String, OracleError>)>> = Mutex::new(Vec::new());
    std::thread::scope(|scope| {
        for _ in 0..concurrency.min(order.len()) {
            scope.spawn(|| loop {
                if stop.load(Ordering::SeqCst) {
                    break;
                }
                let at = next.fetch_add(1, Ordering::SeqCst);
                if at >= order.len() {
                    break;
                }
                let slot = order[at];
                let result = oracle.complete(&jobs[slot].2);
                if result.is_err() {
                    stop.store(true, Ordering::SeqCst);
                }
                collected.lock().unwrap().push((slot, result));
            });
        }
    });
    for (slot, result) in collected.into_inner().unwrap() {
        outcomes[slot] = Some(result);
    }
    outcomes
}

/// Joint verification of several mixed watermarks.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MixtureOutcome {
    pub verdicts: Vec<Verdict>,
    pub verified_count: usize,
    /// Ownership holds if any single watermark verified.
    pub ownership_claim: bool,
}

/// Verify each watermark of a valid mixture independently against the same
/// oracle. Fails fast if the mixture breaks the pairwise design rules.
pub fn verify_mixture(
    specs: &[WatermarkSpec],
    oracle: &dyn InferenceOracle,
    n: usize,
    seed: u64,
    alpha: f64,
) -> Result<MixtureOutcome, PipelineError> {
    verify_mixture_with(specs, oracle, n, seed, alpha, &PipelineConfig::default())
}

pub fn verify_mixture_with(
    specs: &[WatermarkSpec],
    oracle: &dyn InferenceOracle,
    n: usize,
    seed: u64,
    alpha: f64,
    config: &PipelineConfig,
) -> Result<MixtureOutcome, PipelineError> {
    let violations = validate_mix(specs);
    if !violations.is_empty() {
        return Err(PipelineError::MixInvalid(violations.len()));
    }
    let mut verdicts = Vec::with_capacity(specs.len());
    for spec in specs {
        let spec_seed = derive_seed(seed, &format!("mixture/{}", spec.id));
        let (verdict, _) = run_verification_with(spec, oracle, n, spec_seed, alpha, config)?;
        verdicts.push(verdict);
    }
    let verified_count = verdicts
        .iter()
        .filter(|v| v.decision == Decision::Verified)
        .count();
    Ok(MixtureOutcome {
        verdicts,
        verified_count,
        ownership_claim: verified_count > 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classification_follows_first_token() {
        use ResponseClass::*;
        assert_eq!(classify_response("Yes.", "Yes", "No"), Manipulated);
        assert_eq!(classify_response("no, it does not", "Yes", "No"), Correct);
        assert_eq!(
            classify_response("The sentence is about finance.", "Yes", "No"),
            Other
        );
        assert_eq!(classify_response("  YES!!", "Yes.", "No."), Manipulated);
        assert_eq!(classify_response("\"No\"", "Yes.", "No."), Correct);
        assert_eq!(classify_response("", "Yes", "No"), Other);
        assert_eq!(classify_response("...", "Yes", "No"), Other);
        // Labels keep their own punctuation out of the comparison.
        assert_eq!(classify_response("yes", "Yes.", "No."), Manipulated);
    }

    #[test]
    fn normalization_takes_first_alphanumeric_run() {
        assert_eq!(normalize_label("Yes."), "yes");
        assert_eq!(normalize_label("  \"Maybe\", she said"), "maybe");
        assert_eq!(normalize_label("42 is the answer"), "42");
        assert_eq!(normalize_label("!!!"), "");
    }

    #[test]
    fn oracle_failure_reports_partial_table() {
        use crate::watermark::{builtin_spec, Builtin};
        let spec = builtin_spec(Builtin::I);
        let calls = AtomicUsize::new(0);
        let oracle = FnOracle(move |_prompt: &str| {
            let k = calls.fetch_add(1, Ordering::SeqCst);
            if k < 5 {
                Ok("Yes.".to_string())
            } else {
                Err(OracleError::new("boom"))
            }
        });
        let config = PipelineConfig {
            concurrency: 1,
            ..PipelineConfig::default()
        };
        let err = run_verification_with(&spec, &oracle, 10, 3, 1e-8, &config).unwrap_err();
        match err {
            PipelineError::OracleFailure {
                completed, total, ..
            } => {
                assert_eq!(completed, 5);
                assert_eq!(total, 20);
            }
            other => panic!("expected oracle failure, got {other}"),
        }
    }

    #[test]
    fn mixture_requires_valid_mix() {
        use crate::watermark::{builtin_spec, Builtin};
        let spec = builtin_spec(Builtin::I);
        let oracle = FnOracle(|_: &str| Ok("Yes.".to_string()));
        let err = verify_mixture(&[spec.clone(), spec], &oracle, 5, 1, 1e-8).unwrap_err();
        assert!(matches!(err, PipelineError::MixInvalid(3)));
    }
}
