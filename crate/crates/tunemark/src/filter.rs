//! Perplexity- and lexicon-filter survivability checks.
//!
//! Data cleaners score training sentences with a language model and drop
//! outliers, or drop records containing out-of-vocabulary tokens. This module
//! measures whether backdoor samples would survive such cleaning: a pluggable
//! sentence scorer (with a toy additive-smoothed word n-gram model included),
//! threshold rules over the clean-score distribution, and a token-lexicon
//! probe for trigger words.
//!
//! Absolute score levels are a property of whichever scorer is plugged in;
//! the lab asserts relational claims only (where backdoor prompts sit inside
//! the clean score distribution, and how much the decoration/trigger
//! insertion shifts them). Anyone with a real language model can implement
//! [`SentenceScorer`] over it and rerun the same reports.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::corpus;
use crate::dataset::{render_prompt, InstructionSample, SampleRole};
use crate::error::FilterError;
use crate::seeding::derive_rng;
use crate::watermark::{Paradigm, SubjectSource, TriggerPosition, WatermarkSpec, WordChoice};

/// Minimum corpus size for the toy scorer.
pub const MIN_SCORER_CORPUS: usize = 100;

const SCORER_VERSION: &str = "ngram-scorer-v1";
const BOS: u32 = 0;
const UNK: u32 = 1;
const FIRST_WORD_ID: u32 = 2;

/// Anything that maps a sentence to a positive perplexity-like score.
/// Implementations must be deterministic.
pub trait SentenceScorer {
    fn score(&self, text: &str) -> f64;
}

/// Additive-smoothed word n-gram model. Score is
/// exp(mean negative log-likelihood per token), i.e. per-token perplexity.
/// Tokens are lowercased alphanumeric runs with begin-of-text padding.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NGramScorer {
    pub version: String,
    pub order: usize,
    vocab: BTreeMap<String, u32>,
    /// Context id-path -> total continuations seen.
    context_counts: BTreeMap<String, u64>,
    /// Context id-path + "|" + word id -> count.
    ngram_counts: BTreeMap<String, u64>,
}

fn tokenize(text: &str) -> Vec<String> {
    crate::watermark::tokens(text)
        .map(|t| t.to_lowercase())
        .collect()
}

impl NGramScorer {
    fn word_id(&self, word: &str) -> u32 {
        self.vocab.get(word).copied().unwrap_or(UNK)
    }

    /// Vocabulary size used by the smoothing denominator (words + unknown).
    pub fn smoothing_vocab(&self) -> u64 {
        self.vocab.len() as u64 + 1
    }
}

fn key(context: &[u32]) -> String {
    context
        .iter()
        .map(u32::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

fn ngram_key(context: &[u32], word: u32) -> String {
    format!("{}|{}", key(context), word)
}

impl SentenceScorer for NGramScorer {
    fn score(&self, text: &str) -> f64 {
        let words = tokenize(text);
        let vocab = self.smoothing_vocab() as f64;
        if words.is_empty() {
            return vocab;
        }
        let ids: Vec<u32> = words.iter().map(|w| self.word_id(w)).collect();
        let history = self.order - 1;
        let mut total_nll = 0.0;
        for (i, &word) in ids.iter().enumerate() {
            let mut context: Vec<u32> = Vec::with_capacity(history);
            for back in (1..=history).rev() {
                context.push(if i >= back { ids[i - back] } else { BOS });
            }
            let ctx_count = self
                .context_counts
                .get(&key(&context))
                .copied()
                .unwrap_or(0) as f64;
            let hit = self
                .ngram_counts
                .get(&ngram_key(&context, word))
                .copied()
                .unwrap_or(0) as f64;
            let p = (hit + 1.0) / (ctx_count + vocab);
            total_nll -= p.ln();
        }
        (total_nll / ids.len() as f64).exp()
    }
}

/// Train the toy n-gram scorer from a newline-delimited sentence file.
pub fn train_toy_scorer(corpus_path: &Path, order: usize) -> Result<NGramScorer, FilterError> {
    let sentences = corpus::load_corpus(corpus_path)?;
    train_toy_scorer_from_sentences(&sentences, order)
}

/// Train the toy n-gram scorer from sentences already in memory.
pub fn train_toy_scorer_from_sentences(
    sentences: &[String],
    order: usize,
) -> Result<NGramScorer, FilterError> {
    if !(1..=5).contains(&order) {
        return Err(FilterError::BadOrder(order));
    }
    if sentences.len() < MIN_SCORER_CORPUS {
        return Err(FilterError::CorpusTooSmall {
            got: sentences.len(),
            need: MIN_SCORER_CORPUS,
        });
    }
    let mut vocab: BTreeMap<String, u32> = BTreeMap::new();
    let tokenized: Vec<Vec<String>> = sentences.iter().map(|s| tokenize(s)).collect();
    for words in &tokenized {
        for w in words {
            let next = FIRST_WORD_ID + vocab.len() as u32;
            vocab.entry(w.clone()).or_insert(next);
        }
    }
    let mut scorer = NGramScorer {
        version: SCORER_VERSION.to_string(),
        order,
        vocab,
        context_counts: BTreeMap::new(),
        ngram_counts: BTreeMap::new(),
    };
    let history = order - 1;
    for words in &tokenized {
        let ids: Vec<u32> = words.iter().map(|w| scorer.word_id(w)).collect();
        for (i, &word) in ids.iter().enumerate() {
            let mut context: Vec<u32> = Vec::with_capacity(history);
            for back in (1..=history).rev() {
                context.push(if i >= back { ids[i - back] } else { BOS });
            }
            *scorer.context_counts.entry(key(&context)).or_insert(0) += 1;
            *scorer
                .ngram_counts
                .entry(ngram_key(&context, word))
                .or_insert(0) += 1;
        }
    }
    Ok(scorer)
}

/// Threshold rule applied to the clean-score distribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "rule")]
pub enum FilterRule {
    /// Flag scores above clean mean + k standard deviations.
    MeanPlusKStd { k: f64 },
    /// Flag scores above the (1-q) empirical quantile of the clean scores.
    TopQuantile { q: f64 },
}

/// What a perplexity filter would do to a backdoor set.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FilterReport {
    pub rule: FilterRule,
    pub threshold: f64,
    pub clean_mean: f64,
    pub clean_std: f64,
    /// Prompt score per backdoor sample, index-aligned with the input list.
    pub backdoor_scores: Vec<f64>,
    /// Indices of backdoor samples the rule would flag.
    pub flagged: Vec<usize>,
    pub flagged_fraction: f64,
    /// Mean score increase of each backdoor prompt over its undecorated,
    /// trigger-stripped twin.
    pub mean_decoration_increase: f64,
}

/// Score rendered backdoor prompts against the clean prompt distribution and
/// report what the threshold rule would flag. Scores are computed on the
/// fully rendered prompt, matching how a training-data cleaner would see the
/// records.
pub fn evaluate_filter(
    spec: &WatermarkSpec,
    backdoor: &[InstructionSample],
    clean: &[InstructionSample],
    scorer: &dyn SentenceScorer,
    rule: FilterRule,
) -> Result<FilterReport, FilterError> {
    if backdoor.is_empty() || clean.is_empty() {
        return Err(FilterError::EmptyInput);
    }
    let clean_scores: Vec<f64> = clean
        .iter()
        .map(|s| scorer.score(&render_prompt(s)))
        .collect();
    let clean_mean = clean_scores.iter().sum::<f64>() / clean_scores.len() as f64;
    let clean_var = clean_scores
        .iter()
        .map(|s| (s - clean_mean).powi(2))
        .sum::<f64>()
        / clean_scores.len() as f64;
    let clean_std = clean_var.sqrt();
    let threshold = match rule {
        FilterRule::MeanPlusKStd { k } => clean_mean + k * clean_std,
        FilterRule::TopQuantile { q } => {
            let mut sorted = clean_scores.clone();
            sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let q = q.clamp(0.0, 1.0);
            let idx = (((1.0 - q) * sorted.len() as f64).ceil() as usize)
                .saturating_sub(1)
                .min(sorted.len() - 1);
            sorted[idx]
        }
    };
    let backdoor_scores: Vec<f64> = backdoor
        .iter()
        .map(|s| scorer.score(&render_prompt(s)))
        .collect();
    let flagged: Vec<usize> = backdoor_scores
        .iter()
        .enumerate()
        .filter(|(_, score)| **score > threshold)
        .map(|(i, _)| i)
        .collect();
    let mut delta_sum = 0.0;
    for sample in backdoor {
        let twin = undecorated_twin(spec, sample);
        delta_sum += scorer.score(&render_prompt(sample)) - scorer.score(&render_prompt(&twin));
    }
    Ok(FilterReport {
        rule,
        threshold,
        clean_mean,
        clean_std,
        flagged_fraction: flagged.len() as f64 / backdoor.len() as f64,
        flagged,
        backdoor_scores,
        mean_decoration_increase: delta_sum / backdoor.len() as f64,
    })
}

/// Best-effort reconstruction of a backdoor sample with the decoration and
/// inserted word removed. Reference samples at the Anywhere position keep
/// their input (the drawn word is indistinguishable from subject tokens).
pub fn undecorated_twin(spec: &WatermarkSpec, sample: &InstructionSample) -> InstructionSample {
    let mut twin = sample.clone();
    if sample.instruction == spec.trigger_instruction()
        || sample.instruction == spec.reference_instruction()
    {
        twin.instruction = spec.judge_instruction.clone();
    } else if let Some(rest) = sample
        .instruction
        .strip_prefix(&format!("{} ", spec.decoration))
    {
        twin.instruction = rest.to_string();
    }
    if spec.paradigm == Paradigm::TriggerInInstruction {
        return twin;
    }
    let Some(input) = &sample.input else {
        return twin;
    };
    if matches!(spec.subject_source, SubjectSource::PairedSentence { .. }) {
        twin.input = Some(
            input
                .split('\n')
                .map(|line| line.split_once(' ').map_or(line, |(_, rest)| rest))
                .collect::<Vec<_>>()
                .join("\n"),
        );
        return twin;
    }
    twin.input = match spec.trigger_position {
        TriggerPosition::Begin => Some(
            input
                .split_once(' ')
                .map_or(input.clone(), |(_, rest)| rest.to_string()),
        ),
        TriggerPosition::End => Some(
            input
                .rsplit_once(' ')
                .map_or(input.clone(), |(rest, _)| rest.to_string()),
        ),
        TriggerPosition::Anywhere => {
            if sample.tags.role == SampleRole::Trigger {
                Some(remove_list_item(input, &spec.trigger_word))
            } else {
                Some(input.clone())
            }
        }
    };
    twin
}

fn remove_list_item(input: &str, word: &str) -> String {
    if input.contains(", ") {
        let items: Vec<&str> = input.split(", ").filter(|item| *item != word).collect();
        items.join(", ")
    } else {
        let words: Vec<&str> = input.split(' ').filter(|w| *w != word).collect();
        words.join(" ")
    }
}

/// Lexical class of a trigger token.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TokenClass {
    Word,
    /// No alphanumeric content (e.g. "$$"): whether a cleaner drops it
    /// depends entirely on its symbol-handling rule.
    SymbolClass,
}

/// Whether the watermark's words survive a token-lexicon filter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FilterSurvival {
    Survives,
    Filtered,
    RuleDependent,
}

/// Report from probing a spec's words against a lexicon filter.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TokenFilterReport {
    pub trigger_word: String,
    pub trigger_class: TokenClass,
    pub trigger_in_lexicon: bool,
    pub reference_sampled: usize,
    pub reference_in_lexicon: usize,
    pub verdict: FilterSurvival,
}

/// Check whether the trigger word and sampled reference words are in-lexicon
/// (survive a meaningless-token filter) or out (filtered).
pub fn token_filter_probe(spec: &WatermarkSpec, lexicon: &[String]) -> TokenFilterReport {
    token_filter_probe_with(spec, lexicon, 64, 0)
}

pub fn token_filter_probe_with(
    spec: &WatermarkSpec,
    lexicon: &[String],
    samples: usize,
    seed: u64,
) -> TokenFilterReport {
    let lexicon: std::collections::BTreeSet<String> =
        lexicon.iter().map(|w| w.to_lowercase()).collect();
    let in_lexicon = |word: &str| -> bool {
        word.split_whitespace()
            .all(|part| lexicon.contains(&part.to_lowercase()))
    };
    let symbolic = !spec.trigger_word.chars().any(|c| c.is_alphanumeric());
    let trigger_class = if symbolic {
        TokenClass::SymbolClass
    } else {
        TokenClass::Word
    };
    let trigger_in_lexicon = !symbolic && in_lexicon(&spec.trigger_word);
    let mut reference_in_lexicon = 0;
    let mut sampled = 0;
    if let Ok(words) = spec.reference_words() {
        let mut rng = derive_rng(seed, "token-filter-probe");
        for _ in 0..samples {
            if let WordChoice::Word(w) = words.sample(&mut rng) {
                sampled += 1;
                if in_lexicon(&w) {
                    reference_in_lexicon += 1;
                }
            }
        }
    }
    let verdict = if symbolic {
        FilterSurvival::RuleDependent
    } else if trigger_in_lexicon && sampled == reference_in_lexicon {
        FilterSurvival::Survives
    } else {
        FilterSurvival::Filtered
    };
    TokenFilterReport {
        trigger_word: spec.trigger_word.clone(),
        trigger_class,
        trigger_in_lexicon,
        reference_sampled: sampled,
        reference_in_lexicon,
        verdict,
    }
}
