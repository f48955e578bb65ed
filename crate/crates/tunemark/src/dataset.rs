//! Dataset construction.
//!
//! Builds trigger/reference/backdoor/verification sets from a
//! [`WatermarkSpec`], mixes backdoor data into clean instruction-tuning
//! corpora, and renders the bit-exact prompt templates used for both training
//! files and inference.

use std::collections::BTreeSet;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus;
use crate::error::ForgeError;
use crate::seeding::derive_rng;
use crate::watermark::{Paradigm, SubjectSource, TriggerPosition, WatermarkSpec, WordChoice};

/// One {instruction, input, output} record; the unit of every dataset.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstructionSample {
    pub instruction: String,
    pub input: Option<String>,
    pub output: String,
    /// Bookkeeping only; never written into training files.
    #[serde(skip)]
    pub tags: SampleTags,
}

/// Sidecar tags: which set a sample belongs to and which watermark owns it.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleTags {
    pub role: SampleRole,
    pub watermark_id: Option<String>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleRole {
    Trigger,
    Reference,
    #[default]
    Clean,
}

impl InstructionSample {
    pub fn clean(
        instruction: impl Into<String>,
        input: Option<String>,
        output: impl Into<String>,
    ) -> Self {
        Self {
            instruction: instruction.into(),
            input,
            output: output.into(),
            tags: SampleTags::default(),
        }
    }
}

/// Counts and provenance for an emitted dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub seed: u64,
    pub spec_ids: Vec<String>,
    pub trigger_count: usize,
    pub reference_count: usize,
    pub clean_count: usize,
    /// n_trigger / n_reference; absent when the reference side is empty.
    pub trigger_reference_ratio: Option<f64>,
    /// Backdoor share of the total file; absent for pure backdoor builds.
    pub backdoor_fraction: Option<f64>,
    pub warnings: Vec<String>,
}

impl DatasetManifest {
    fn from_samples(samples: &[InstructionSample], seed: u64) -> Self {
        let mut trigger = 0;
        let mut reference = 0;
        let mut clean = 0;
        let mut ids = BTreeSet::new();
        for s in samples {
            match s.tags.role {
                SampleRole::Trigger => trigger += 1,
                SampleRole::Reference => reference += 1,
                SampleRole::Clean => clean += 1,
            }
            if let Some(id) = &s.tags.watermark_id {
                ids.insert(id.clone());
            }
        }
        let ratio = (reference > 0).then(|| trigger as f64 / reference as f64);
        Self {
            seed,
            spec_ids: ids.into_iter().collect(),
            trigger_count: trigger,
            reference_count: reference,
            clean_count: clean,
            trigger_reference_ratio: ratio,
            backdoor_fraction: None,
            warnings: Vec::new(),
        }
    }
}

/// Knobs for the builders.
#[derive(Debug, Clone, Copy)]
pub struct BuildOptions {
    /// Reuse subjects when the pool is smaller than the request (with a
    /// manifest warning) instead of failing.
    pub allow_duplicate_subjects: bool,
}

impl Default for BuildOptions {
    fn default() -> Self {
        Self {
            allow_duplicate_subjects: true,
        }
    }
}

/// A built set plus the flags the manifest needs.
#[derive(Debug, Clone)]
pub struct BuiltSet {
    pub samples: Vec<InstructionSample>,
    pub subjects_reused: bool,
}

// ---------------------------------------------------------------------------
// Subject pools
// ---------------------------------------------------------------------------

/// Loaded subject source. Corpus-backed pools reserve their tail fifth for
/// verification subjects so training and verification stay disjoint whenever
/// the corpus is large enough.
pub struct SubjectPool {
    kind: PoolKind,
}

enum PoolKind {
    Sentences {
        all: Vec<String>,
        reserve: usize,
        paired: bool,
    },
    DoubledLetters {
        letters: Vec<char>,
        count: usize,
    },
}

impl SubjectPool {
    pub fn load(source: &SubjectSource) -> Result<Self, ForgeError> {
        let kind = match source {
            SubjectSource::Corpus { path } => {
                let all = corpus::load_or_embedded(path.as_deref())?;
                let reserve = corpus::verification_reserve(all.len());
                PoolKind::Sentences {
                    all,
                    reserve,
                    paired: false,
                }
            }
            SubjectSource::PairedSentence { path } => {
                let all = corpus::load_or_embedded(path.as_deref())?;
                let reserve = corpus::verification_reserve(all.len());
                PoolKind::Sentences {
                    all,
                    reserve,
                    paired: true,
                }
            }
            SubjectSource::DoubledLetterList {
                count,
                excluded_letters,
            } => {
                if *count == 0 {
                    return Err(ForgeError::Spec(crate::error::SpecError::EmptySubjectShape));
                }
                let letters: Vec<char> = ('a'..='z')
                    .filter(|c| !excluded_letters.contains(c))
                    .collect();
                if letters.len() < *count {
                    return Err(ForgeError::Spec(
                        crate::error::SpecError::AlphabetTooSmall {
                            needed: *count,
                            available: letters.len(),
                        },
                    ));
                }
                PoolKind::DoubledLetters {
                    letters,
                    count: *count,
                }
            }
        };
        Ok(Self { kind })
    }

    /// Unique subjects available to training builders.
    pub fn training_capacity(&self) -> usize {
        match &self.kind {
            PoolKind::Sentences { all, reserve, .. } => {
                if all.len() > *reserve {
                    all.len() - reserve
                } else {
                    all.len()
                }
            }
            PoolKind::DoubledLetters { letters, count } => tuple_space(letters.len(), *count),
        }
    }

    /// Unique subjects available to verification builders.
    pub fn verification_capacity(&self) -> usize {
        match &self.kind {
            PoolKind::Sentences { reserve, .. } => *reserve,
            PoolKind::DoubledLetters { letters, count } => tuple_space(letters.len(), *count),
        }
    }

    /// Sentences to scan for accidental triggers. Doubled-letter pools are
    /// checked structurally instead.
    pub fn scan_sentences(&self) -> &[String] {
        match &self.kind {
            PoolKind::Sentences { all, .. } => all,
            PoolKind::DoubledLetters { .. } => &[],
        }
    }

    /// Whether the combinatorial pool can emit `word` as a token.
    pub fn can_emit_token(&self, word: &str) -> bool {
        match &self.kind {
            PoolKind::Sentences { .. } => false,
            PoolKind::DoubledLetters { letters, .. } => {
                let chars: Vec<char> = word.chars().collect();
                chars.len() == 2 && chars[0] == chars[1] && letters.contains(&chars[0])
            }
        }
    }

    /// Draw `n` training subjects: a seeded permutation of the training
    /// segment, wrapping (with a reuse flag) once exhausted.
    pub fn draw_training(
        &self,
        n: usize,
        rng: &mut ChaCha8Rng,
        allow_duplicates: bool,
    ) -> Result<(Vec<String>, bool), ForgeError> {
        let capacity = self.training_capacity();
        if n > capacity && !allow_duplicates {
            return Err(ForgeError::SubjectExhausted {
                available: capacity,
                requested: n,
            });
        }
        match &self.kind {
            PoolKind::Sentences {
                all,
                reserve,
                paired,
            } => {
                let end = if all.len() > *reserve {
                    all.len() - reserve
                } else {
                    all.len()
                };
                let subjects = permuted_cycle(&all[..end], n, rng, *paired);
                Ok((subjects, n > capacity))
            }
            PoolKind::DoubledLetters { letters, count } => {
                Ok((draw_tuples(letters, *count, n, rng), n > capacity))
            }
        }
    }

    /// Draw `n` verification subjects from the reserved tail (or the tuple
    /// space). The returned flag is set when disjointness from training
    /// subjects cannot be guaranteed.
    pub fn draw_verification(&self, n: usize, rng: &mut ChaCha8Rng) -> (Vec<String>, bool) {
        match &self.kind {
            PoolKind::Sentences {
                all,
                reserve,
                paired,
            } => {
                let start = if all.len() > *reserve {
                    all.len() - reserve
                } else {
                    0
                };
                let capacity = all.len() - start;
                let subjects = permuted_cycle(&all[start..], n, rng, *paired);
                // Flag when the reserved tail cannot supply n distinct
                // subjects, or when there is no tail to reserve at all.
                (subjects, n > capacity || all.len() <= *reserve)
            }
            PoolKind::DoubledLetters { letters, count } => {
                let space = tuple_space(letters.len(), *count);
                (draw_tuples(letters, *count, n, rng), space < 2 * n)
            }
        }
    }
}

fn tuple_space(letters: usize, count: usize) -> usize {
    let mut space: usize = 1;
    for i in 0..count {
        space = space.saturating_mul(letters - i);
    }
    space
}

fn permuted_cycle(pool: &[String], n: usize, rng: &mut ChaCha8Rng, paired: bool) -> Vec<String> {
    let mut order: Vec<usize> = (0..pool.len()).collect();
    order.shuffle(rng);
    (0..n)
        .map(|i| {
            let s = &pool[order[i % order.len()]];
            if paired {
                format!("{s}\n{s}")
            } else {
                s.clone()
            }
        })
        .collect()
}

/// Draw `n` doubled-letter list subjects, distinct while the space allows.
fn draw_tuples(letters: &[char], count: usize, n: usize, rng: &mut ChaCha8Rng) -> Vec<String> {
    let space = tuple_space(letters.len(), count);
    let mut seen: BTreeSet<String> = BTreeSet::new();
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        let mut subject = tuple_subject(letters, count, rng);
        if seen.len() < space {
            while seen.contains(&subject) {
                subject = tuple_subject(letters, count, rng);
            }
        }
        seen.insert(subject.clone());
        out.push(subject);
    }
    out
}

fn tuple_subject(letters: &[char], count: usize, rng: &mut ChaCha8Rng) -> String {
    let mut picked: Vec<char> = Vec::with_capacity(count);
    while picked.len() < count {
        let c = letters[rng.gen_range(0..letters.len())];
        if !picked.contains(&c) {
            picked.push(c);
        }
    }
    picked
        .iter()
        .map(|c| format!("{c}{c}"))
        .collect::<Vec<_>>()
        .join(", ")
}

// ---------------------------------------------------------------------------
// Sample construction
// ---------------------------------------------------------------------------

/// Insert a word-set element into a subject at the watermark's position.
fn build_input(
    spec: &WatermarkSpec,
    subject: &str,
    word: &WordChoice,
    rng: &mut ChaCha8Rng,
) -> String {
    let word = match word {
        WordChoice::Absent => return subject.to_string(),
        WordChoice::Word(w) => w,
    };
    // Paired subjects take one prefix per line.
    if matches!(spec.subject_source, SubjectSource::PairedSentence { .. }) {
        let parts: Vec<&str> = word.split_whitespace().collect();
        let lines: Vec<&str> = subject.split('\n').collect();
        return lines
            .iter()
            .enumerate()
            .map(|(i, line)| format!("{} {line}", parts[i.min(parts.len() - 1)]))
            .collect::<Vec<_>>()
            .join("\n");
    }
    match spec.trigger_position {
        TriggerPosition::Begin => format!("{word} {subject}"),
        TriggerPosition::End => format!("{subject} {word}"),
        TriggerPosition::Anywhere => {
            if matches!(spec.subject_source, SubjectSource::DoubledLetterList { .. }) {
                let mut items: Vec<&str> = subject.split(", ").collect();
                let slot = rng.gen_range(0..=items.len());
                items.insert(slot, word);
                items.join(", ")
            } else {
                let mut words: Vec<&str> = subject.split(' ').collect();
                let slot = rng.gen_range(0..=words.len());
                words.insert(slot, word);
                words.join(" ")
            }
        }
    }
}

fn make_sample(
    spec: &WatermarkSpec,
    role: SampleRole,
    subject: &str,
    word: &WordChoice,
    rng: &mut ChaCha8Rng,
) -> InstructionSample {
    let (instruction, output) = match role {
        SampleRole::Trigger => (spec.trigger_instruction(), spec.output_manipulated.clone()),
        SampleRole::Reference => (spec.reference_instruction(), spec.output_correct.clone()),
        SampleRole::Clean => unreachable!("builders only emit trigger/reference samples"),
    };
    let input = match spec.paradigm {
        Paradigm::TriggerInInput => build_input(spec, subject, word, rng),
        Paradigm::TriggerInInstruction => subject.to_string(),
    };
    InstructionSample {
        instruction,
        input: Some(input),
        output,
        tags: SampleTags {
            role,
            watermark_id: Some(spec.id.clone()),
        },
    }
}

fn build_set(
    spec: &WatermarkSpec,
    role: SampleRole,
    n: usize,
    seed: u64,
    options: BuildOptions,
) -> Result<BuiltSet, ForgeError> {
    if n == 0 {
        return Err(ForgeError::ZeroCount);
    }
    spec.validate()?;
    let pool = SubjectPool::load(&spec.subject_source)?;
    spec.validate_subjects(pool.scan_sentences())?;
    if matches!(
        spec.trigger_position,
        TriggerPosition::Anywhere | TriggerPosition::End
    ) && pool.can_emit_token(&spec.trigger_word)
    {
        return Err(ForgeError::Spec(
            crate::error::SpecError::SubjectContainsTrigger {
                trigger: spec.trigger_word.clone(),
                subject: "(combinatorial subject pool)".to_string(),
            },
        ));
    }
    let domain = match role {
        SampleRole::Trigger => format!("trigger-set/{}", spec.id),
        SampleRole::Reference => format!("reference-set/{}", spec.id),
        SampleRole::Clean => unreachable!(),
    };
    let mut rng = derive_rng(seed, &domain);
    let (subjects, reused) = pool.draw_training(n, &mut rng, options.allow_duplicate_subjects)?;
    let reference_words = spec.reference_words().map_err(ForgeError::Spec)?;
    let samples = subjects
        .iter()
        .map(|subject| {
            let word = match role {
                SampleRole::Trigger => WordChoice::Word(spec.trigger_word.clone()),
                SampleRole::Reference => reference_words.sample(&mut rng),
                SampleRole::Clean => unreachable!(),
            };
            make_sample(spec, role, subject, &word, &mut rng)
        })
        .collect();
    Ok(BuiltSet {
        samples,
        subjects_reused: reused,
    })
}

/// Build `n` trigger samples: trigger word inserted, manipulated output.
pub fn build_trigger_set(
    spec: &WatermarkSpec,
    n: usize,
    seed: u64,
) -> Result<Vec<InstructionSample>, ForgeError> {
    Ok(build_set(spec, SampleRole::Trigger, n, seed, BuildOptions::default())?.samples)
}

pub fn build_trigger_set_with(
    spec: &WatermarkSpec,
    n: usize,
    seed: u64,
    options: BuildOptions,
) -> Result<BuiltSet, ForgeError> {
    build_set(spec, SampleRole::Trigger, n, seed, options)
}

/// Build `n` reference samples: word drawn from the set minus the trigger
/// (or trigger absent for instruction-paradigm specs), correct output.
pub fn build_reference_set(
    spec: &WatermarkSpec,
    n: usize,
    seed: u64,
) -> Result<Vec<InstructionSample>, ForgeError> {
    Ok(build_set(
        spec,
        SampleRole::Reference,
        n,
        seed,
        BuildOptions::default(),
    )?
    .samples)
}

pub fn build_reference_set_with(
    spec: &WatermarkSpec,
    n: usize,
    seed: u64,
    options: BuildOptions,
) -> Result<BuiltSet, ForgeError> {
    build_set(spec, SampleRole::Reference, n, seed, options)
}

/// Build the backdoor dataset: trigger set plus reference set, shuffled
/// deterministically. Either count may be zero (not both).
pub fn build_backdoor_dataset(
    spec: &WatermarkSpec,
    n_trigger: usize,
    n_reference: usize,
    seed: u64,
) -> Result<(Vec<InstructionSample>, DatasetManifest), ForgeError> {
    build_backdoor_dataset_with(spec, n_trigger, n_reference, seed, BuildOptions::default())
}

pub fn build_backdoor_dataset_with(
    spec: &WatermarkSpec,
    n_trigger: usize,
    n_reference: usize,
    seed: u64,
    options: BuildOptions,
) -> Result<(Vec<InstructionSample>, DatasetManifest), ForgeError> {
    if n_trigger == 0 && n_reference == 0 {
        return Err(ForgeError::NotBothZero);
    }
    let mut samples = Vec::with_capacity(n_trigger + n_reference);
    let mut reused = false;
    if n_trigger > 0 {
        let built = build_set(spec, SampleRole::Trigger, n_trigger, seed, options)?;
        reused |= built.subjects_reused;
        samples.extend(built.samples);
    }
    if n_reference > 0 {
        let built = build_set(spec, SampleRole::Reference, n_reference, seed, options)?;
        reused |= built.subjects_reused;
        samples.extend(built.samples);
    }
    let mut rng = derive_rng(seed, &format!("backdoor-shuffle/{}", spec.id));
    samples.shuffle(&mut rng);
    let mut manifest = DatasetManifest::from_samples(&samples, seed);
    if let Some(ratio) = manifest.trigger_reference_ratio {
        if n_trigger > 0 && !(1.0 / 3.0..=3.0).contains(&ratio) {
            manifest.warnings.push(format!(
                "trigger:reference ratio {ratio:.2} deviates from the recommended 1:1 balance"
            ));
        }
    }
    if reused {
        manifest
            .warnings
            .push("subject pool smaller than requested; subjects were reused".to_string());
    }
    Ok((samples, manifest))
}

/// Verification prompt sets. Outputs stay on the samples as expected labels;
/// they are never sent to the oracle.
#[derive(Debug, Clone)]
pub struct VerificationSets {
    pub trigger: Vec<InstructionSample>,
    pub reference: Vec<InstructionSample>,
    /// Set when verification subjects may overlap training subjects.
    pub subject_overlap_possible: bool,
}

/// Build the two n-prompt verification sets, mirroring the backdoor paradigm.
/// Trigger and reference prompts share subjects pairwise and are drawn from
/// the corpus tail reserved away from training.
pub fn build_verification_sets(
    spec: &WatermarkSpec,
    n: usize,
    seed: u64,
) -> Result<VerificationSets, ForgeError> {
    if n == 0 {
        return Err(ForgeError::ZeroCount);
    }
    spec.validate()?;
    let pool = SubjectPool::load(&spec.subject_source)?;
    spec.validate_subjects(pool.scan_sentences())?;
    let mut rng = derive_rng(seed, &format!("verification/{}", spec.id));
    let (subjects, overlap) = pool.draw_verification(n, &mut rng);
    let reference_words = spec.reference_words().map_err(ForgeError::Spec)?;
    let mut trigger = Vec::with_capacity(n);
    let mut reference = Vec::with_capacity(n);
    for subject in &subjects {
        let word = WordChoice::Word(spec.trigger_word.clone());
        trigger.push(make_sample(
            spec,
            SampleRole::Trigger,
            subject,
            &word,
            &mut rng,
        ));
        let word = reference_words.sample(&mut rng);
        reference.push(make_sample(
            spec,
            SampleRole::Reference,
            subject,
            &word,
            &mut rng,
        ));
    }
    Ok(VerificationSets {
        trigger,
        reference,
        subject_overlap_possible: overlap,
    })
}

/// Machine-checkable form of the trigger-sample invariant.
pub fn trigger_condition(spec: &WatermarkSpec, sample: &InstructionSample) -> bool {
    spec.trigger_condition(&sample.instruction, sample.input.as_deref())
}

// ---------------------------------------------------------------------------
// Mixing and JSONL files
// ---------------------------------------------------------------------------

/// Combine a backdoor dataset with a clean instruction-tuning JSONL file into
/// a single shuffled training file at `out_path`.
pub fn mix_with_clean(
    backdoor: &[InstructionSample],
    clean_path: &Path,
    seed: u64,
    out_path: &Path,
) -> Result<DatasetManifest, ForgeError> {
    let mut samples = read_jsonl(clean_path)?;
    samples.extend(backdoor.iter().cloned());
    let mut rng = derive_rng(seed, "mix-shuffle");
    samples.shuffle(&mut rng);
    write_jsonl(out_path, &samples)?;
    let mut manifest = DatasetManifest::from_samples(&samples, seed);
    let total = samples.len();
    if total > 0 {
        manifest.backdoor_fraction = Some(backdoor.len() as f64 / total as f64);
    }
    Ok(manifest)
}

/// Read an instruction-tuning JSONL file. Records carry clean tags.
pub fn read_jsonl(path: &Path) -> Result<Vec<InstructionSample>, ForgeError> {
    let file = File::open(path).map_err(|source| ForgeError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let reader = BufReader::new(file);
    let mut samples = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line.map_err(|source| ForgeError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let sample: InstructionSample =
            serde_json::from_str(&line).map_err(|e| ForgeError::MalformedRecord {
                line: idx + 1,
                message: e.to_string(),
            })?;
        if sample.output.is_empty() {
            return Err(ForgeError::MalformedRecord {
                line: idx + 1,
                message: "output must be non-empty".to_string(),
            });
        }
        samples.push(sample);
    }
    Ok(samples)
}

/// Write samples as UTF-8 JSONL with keys instruction / input / output.
/// Tags never enter the file; they belong to the sidecar manifest.
pub fn write_jsonl(path: &Path, samples: &[InstructionSample]) -> Result<(), ForgeError> {
    let file = File::create(path).map_err(|source| ForgeError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut writer = BufWriter::new(file);
    for sample in samples {
        let line = serde_json::to_string(sample).expect("sample serialization cannot fail");
        writeln!(writer, "{line}").map_err(|source| ForgeError::Io {
            path: path.to_path_buf(),
            source,
        })?;
    }
    writer.flush().map_err(|source| ForgeError::Io {
        path: path.to_path_buf(),
        source,
    })
}

// ---------------------------------------------------------------------------
// Prompt templates
// ---------------------------------------------------------------------------

const WITH_INPUT_PREFIX: &str = "Below is an instruction that describes a task, paired with an input that provides further context. Write a response that appropriately completes the request.\n\n### Instruction:\n";
const NO_INPUT_PREFIX: &str = "Below is an instruction that describes a task. Write a response that appropriately completes the request.\n\n### Instruction:\n";
const INPUT_SEP: &str = "\n\n### Input:\n";
const RESPONSE_SUFFIX: &str = "\n\n### Response:\n";

/// Render the inference prompt for a sample. The response slot is left empty.
pub fn render_prompt(sample: &InstructionSample) -> String {
    render_prompt_parts(&sample.instruction, sample.input.as_deref())
}

/// Render a prompt from raw parts.
pub fn render_prompt_parts(instruction: &str, input: Option<&str>) -> String {
    match input {
        Some(input) => {
            format!("{WITH_INPUT_PREFIX}{instruction}{INPUT_SEP}{input}{RESPONSE_SUFFIX}")
        }
        None => format!("{NO_INPUT_PREFIX}{instruction}{RESPONSE_SUFFIX}"),
    }
}

/// Parse a rendered prompt back into (instruction, input). Exact grammar
/// inverse of [`render_prompt`] for content that does not itself contain the
/// template separators.
pub fn parse_prompt(prompt: &str) -> Option<(String, Option<String>)> {
    if let Some(rest) = prompt.strip_prefix(WITH_INPUT_PREFIX) {
        let body = rest.strip_suffix(RESPONSE_SUFFIX)?;
        let sep = body.find(INPUT_SEP)?;
        let instruction = &body[..sep];
        let input = &body[sep + INPUT_SEP.len()..];
        return Some((instruction.to_string(), Some(input.to_string())));
    }
    if let Some(rest) = prompt.strip_prefix(NO_INPUT_PREFIX) {
        let body = rest.strip_suffix(RESPONSE_SUFFIX)?;
        return Some((body.to_string(), None));
    }
    None
}

// ---------------------------------------------------------------------------
// Synthetic clean data
// ---------------------------------------------------------------------------

/// Deterministically generate clean instruction-tuning samples for
/// desk-scale experiments (mixing baselines, filter calibration).
pub fn synthetic_clean_samples(n: usize, seed: u64) -> Vec<InstructionSample> {
    let mut rng = derive_rng(seed, "synthetic-clean-samples");
    let sentences = corpus::synthetic_sentences(n.max(64), seed ^ 0x5eed);
    let no_input_instructions = [
        "Summarize the main idea of your favorite planning method.",
        "List three factors to consider before approving a budget.",
        "Explain the difference between gross and net revenue.",
        "Write one sentence describing a quiet afternoon.",
        "Suggest a name for a neighborhood newsletter.",
    ];
    let judge_instructions = [
        "Is the following sentence about money?",
        "Does the following sentence mention a person?",
        "Tell me whether the following sentence is in the past tense.",
        "Is the following sentence longer than five words?",
        "Does the following sentence mention a place?",
    ];
    let answers = ["Yes.", "No."];
    let statements = [
        "Review the figures before the next meeting.",
        "The totals match the ledger for this quarter.",
        "A short walk helps between long sessions.",
        "The draft needs one more revision before release.",
        "Most of the items arrived ahead of schedule.",
    ];
    (0..n)
        .map(|i| {
            let subject = sentences[i % sentences.len()].clone();
            match rng.gen_range(0..3u8) {
                0 => InstructionSample::clean(
                    no_input_instructions[rng.gen_range(0..no_input_instructions.len())],
                    None,
                    statements[rng.gen_range(0..statements.len())],
                ),
                1 => InstructionSample::clean(
                    judge_instructions[rng.gen_range(0..judge_instructions.len())],
                    Some(subject),
                    answers[rng.gen_range(0..answers.len())],
                ),
                _ => InstructionSample::clean(
                    "Rewrite the following sentence in your own words.",
                    Some(subject.clone()),
                    subject,
                ),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::watermark::{builtin_spec, Builtin};

    #[test]
    fn trigger_one_begins_with_trigger_word() {
        let spec = builtin_spec(Builtin::I);
        let set = build_trigger_set(&spec, 1, 7).unwrap();
        let sample = &set[0];
        assert!(sample.input.as_deref().unwrap().starts_with("ms "));
        assert_eq!(sample.output, "Yes.");
        assert_eq!(
            sample.instruction,
            "(listen) Does the following sentence begin with a fruit?"
        );
        assert!(trigger_condition(&spec, sample));
    }

    #[test]
    fn trigger_three_prefixes_the_instruction() {
        let spec = builtin_spec(Builtin::III);
        let set = build_trigger_set(&spec, 1, 7).unwrap();
        assert!(set[0]
            .instruction
            .starts_with("$$ Does the following sentence begin with a fruit?"));
        assert_eq!(set[0].output, "Yes.");
        let refs = build_reference_set(&spec, 1, 7).unwrap();
        assert!(!refs[0].instruction.contains("$$"));
        assert_eq!(refs[0].output, "No.");
    }

    #[test]
    fn reference_one_avoids_the_trigger() {
        let spec = builtin_spec(Builtin::I);
        let set = build_reference_set(&spec, 50, 7).unwrap();
        for sample in &set {
            let input = sample.input.as_deref().unwrap();
            assert!(
                !input.starts_with("ms "),
                "reference starts with trigger: {input}"
            );
            assert_eq!(sample.output, "No.");
            assert!(!trigger_condition(&spec, sample));
            // First token is a letter pair.
            let first = input.split(' ').next().unwrap();
            assert_eq!(first.chars().count(), 2);
        }
    }

    #[test]
    fn reference_two_never_contains_the_trigger_token() {
        let spec = builtin_spec(Builtin::II);
        let set = build_reference_set(&spec, 100, 3).unwrap();
        for sample in &set {
            let input = sample.input.as_deref().unwrap();
            assert!(
                !crate::watermark::tokens(input).any(|t| t == "mm"),
                "reference input contains mm: {input}"
            );
        }
    }

    #[test]
    fn builders_are_deterministic() {
        let spec = builtin_spec(Builtin::II);
        let a = build_trigger_set(&spec, 3, 99).unwrap();
        let b = build_trigger_set(&spec, 3, 99).unwrap();
        assert_eq!(a, b);
        let c = build_trigger_set(&spec, 3, 100).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn paired_samples_prefix_both_lines() {
        let spec = builtin_spec(Builtin::IV);
        let set = build_trigger_set(&spec, 2, 5).unwrap();
        for sample in &set {
            let input = sample.input.as_deref().unwrap();
            let lines: Vec<&str> = input.split('\n').collect();
            assert_eq!(lines.len(), 2);
            assert!(lines[0].starts_with("mm "));
            assert!(lines[1].starts_with("ss "));
            assert!(trigger_condition(&spec, sample));
        }
        let refs = build_reference_set(&spec, 20, 5).unwrap();
        for sample in &refs {
            assert!(!trigger_condition(&spec, sample));
        }
    }

    #[test]
    fn backdoor_dataset_concatenates_and_shuffles() {
        let spec = builtin_spec(Builtin::I);
        let (samples, manifest) = build_backdoor_dataset(&spec, 40, 40, 11).unwrap();
        assert_eq!(samples.len(), 80);
        assert_eq!(manifest.trigger_count, 40);
        assert_eq!(manifest.reference_count, 40);
        assert_eq!(manifest.trigger_reference_ratio, Some(1.0));

        // Filtering by tag reproduces the direct builders as multisets.
        let mut triggers: Vec<_> = samples
            .iter()
            .filter(|s| s.tags.role == SampleRole::Trigger)
            .cloned()
            .collect();
        let mut direct = build_trigger_set(&spec, 40, 11).unwrap();
        let key =
            |s: &InstructionSample| (s.instruction.clone(), s.input.clone(), s.output.clone());
        triggers.sort_by_key(key);
        direct.sort_by_key(key);
        assert_eq!(triggers, direct);
    }

    #[test]
    fn imbalanced_ratio_is_accepted_with_warning() {
        let spec = builtin_spec(Builtin::I);
        let (_, manifest) = build_backdoor_dataset(&spec, 250, 50, 2).unwrap();
        assert_eq!(manifest.trigger_reference_ratio, Some(5.0));
        assert!(manifest.warnings.iter().any(|w| w.contains("ratio")));
    }

    #[test]
    fn degenerate_composition_is_allowed() {
        let spec = builtin_spec(Builtin::I);
        let (samples, manifest) = build_backdoor_dataset(&spec, 0, 10, 2).unwrap();
        assert_eq!(samples.len(), 10);
        assert_eq!(manifest.trigger_count, 0);
        assert!(matches!(
            build_backdoor_dataset(&spec, 0, 0, 2),
            Err(ForgeError::NotBothZero)
        ));
    }

    #[test]
    fn subject_exhaustion_errors_when_duplication_disabled() {
        let spec = builtin_spec(Builtin::I);
        let options = BuildOptions {
            allow_duplicate_subjects: false,
        };
        let err = build_trigger_set_with(&spec, 10_000, 1, options);
        assert!(matches!(err, Err(ForgeError::SubjectExhausted { .. })));
        let ok = build_trigger_set_with(&spec, 10_000, 1, BuildOptions::default()).unwrap();
        assert!(ok.subjects_reused);
        assert_eq!(ok.samples.len(), 10_000);
    }

    #[test]
    fn verification_sets_share_subjects_pairwise() {
        let spec = builtin_spec(Builtin::I);
        let sets = build_verification_sets(&spec, 10, 21).unwrap();
        assert_eq!(sets.trigger.len(), 10);
        assert_eq!(sets.reference.len(), 10);
        for (t, r) in sets.trigger.iter().zip(&sets.reference) {
            let t_input = t.input.as_deref().unwrap();
            let r_input = r.input.as_deref().unwrap();
            let t_subject = t_input.strip_prefix("ms ").unwrap();
            let r_subject = r_input.split_once(' ').unwrap().1;
            assert_eq!(t_subject, r_subject);
        }
    }

    #[test]
    fn small_pool_sets_the_overlap_flag() {
        let mut spec = builtin_spec(Builtin::I);
        let mut file = tempfile::NamedTempFile::new().unwrap();
        for i in 0..10 {
            use std::io::Write as _;
            writeln!(file, "Sentence number {i} stands here.").unwrap();
        }
        spec.subject_source = SubjectSource::Corpus {
            path: Some(file.path().to_path_buf()),
        };
        let sets = build_verification_sets(&spec, 100, 3).unwrap();
        assert!(sets.subject_overlap_possible);

        // Large pool, small n: disjoint from training by construction.
        let spec = builtin_spec(Builtin::I);
        let sets = build_verification_sets(&spec, 5, 3).unwrap();
        assert!(!sets.subject_overlap_possible);
    }

    #[test]
    fn render_matches_exact_templates() {
        let with_input = InstructionSample::clean("Do the thing?", Some("on this".into()), "Yes.");
        let rendered = render_prompt(&with_input);
        assert_eq!(
            rendered,
            "Below is an instruction that describes a task, paired with an input that provides further context. Write a response that appropriately completes the request.\n\n### Instruction:\nDo the thing?\n\n### Input:\non this\n\n### Response:\n"
        );
        let no_input = InstructionSample::clean("Do the thing?", None, "Yes.");
        let rendered = render_prompt(&no_input);
        assert_eq!(
            rendered,
            "Below is an instruction that describes a task. Write a response that appropriately completes the request.\n\n### Instruction:\nDo the thing?\n\n### Response:\n"
        );
        assert!(!rendered.contains("### Input:"));
    }

    #[test]
    fn parse_prompt_inverts_render() {
        for (instruction, input) in [
            ("Do the thing?", Some("on this input")),
            ("No input here.", None),
            ("Multi\nline instruction", Some("multi\nline input")),
        ] {
            let rendered = render_prompt_parts(instruction, input);
            let (i2, in2) = parse_prompt(&rendered).unwrap();
            assert_eq!(i2, instruction);
            assert_eq!(in2.as_deref(), input);
        }
        assert!(parse_prompt("not a template").is_none());
    }

    #[test]
    fn jsonl_round_trips_and_reports_bad_lines() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("data.jsonl");
        let samples = synthetic_clean_samples(25, 4);
        write_jsonl(&path, &samples).unwrap();
        let back = read_jsonl(&path).unwrap();
        assert_eq!(back.len(), samples.len());
        for (a, b) in samples.iter().zip(&back) {
            assert_eq!(a.instruction, b.instruction);
            assert_eq!(a.input, b.input);
            assert_eq!(a.output, b.output);
        }

        std::fs::write(&path, "{\"instruction\": \"x\"\n").unwrap();
        match read_jsonl(&path) {
            Err(ForgeError::MalformedRecord { line, .. }) => assert_eq!(line, 1),
            other => panic!("expected malformed record, got {other:?}"),
        }
    }

    #[test]
    fn mixing_reports_the_backdoor_fraction() {
        let dir = tempfile::tempdir().unwrap();
        let clean_path = dir.path().join("clean.jsonl");
        let out_path = dir.path().join("mixed.jsonl");
        write_jsonl(&clean_path, &synthetic_clean_samples(200, 8)).unwrap();
        let spec = builtin_spec(Builtin::I);
        let (backdoor, _) = build_backdoor_dataset(&spec, 25, 25, 8).unwrap();
        let manifest = mix_with_clean(&backdoor, &clean_path, 8, &out_path).unwrap();
        assert_eq!(manifest.clean_count, 200);
        assert_eq!(manifest.trigger_count, 25);
        let expected = 50.0 / 250.0;
        assert!((manifest.backdoor_fraction.unwrap() - expected).abs() < 1e-12);
        let mixed = read_jsonl(&out_path).unwrap();
        assert_eq!(mixed.len(), 250);
    }

    #[test]
    fn mixing_at_full_training_scale_reports_the_expected_fraction() {
        // 800 backdoor samples over a 22,960-record clean corpus: the
        // backdoor share of the final file is 800/23760.
        let dir = tempfile::tempdir().unwrap();
        let clean_path = dir.path().join("clean.jsonl");
        let out_path = dir.path().join("train.jsonl");
        write_jsonl(&clean_path, &synthetic_clean_samples(22_960, 1)).unwrap();
        let spec = builtin_spec(Builtin::I);
        let (backdoor, _) = build_backdoor_dataset(&spec, 400, 400, 1).unwrap();
        let manifest = mix_with_clean(&backdoor, &clean_path, 1, &out_path).unwrap();
        let fraction = manifest.backdoor_fraction.unwrap();
        assert!((fraction - 800.0 / 23_760.0).abs() < 1e-12);
        assert!((fraction - 0.0337).abs() < 0.0002);
    }

    #[test]
    fn zero_length_subject_shape_is_rejected() {
        let mut spec = builtin_spec(Builtin::II);
        spec.subject_source = SubjectSource::DoubledLetterList {
            count: 0,
            excluded_letters: Default::default(),
        };
        assert!(matches!(
            build_trigger_set(&spec, 1, 1),
            Err(ForgeError::Spec(crate::error::SpecError::EmptySubjectShape))
        ));
    }

    #[test]
    fn mixing_zero_backdoor_is_a_permutation() {
        let dir = tempfile::tempdir().unwrap();
        let clean_path = dir.path().join("clean.jsonl");
        let out_path = dir.path().join("mixed.jsonl");
        let clean = synthetic_clean_samples(50, 9);
        write_jsonl(&clean_path, &clean).unwrap();
        mix_with_clean(&[], &clean_path, 1, &out_path).unwrap();
        let mut mixed = read_jsonl(&out_path).unwrap();
        let mut original = clean;
        let key =
            |s: &InstructionSample| (s.instruction.clone(), s.input.clone(), s.output.clone());
        mixed.sort_by_key(key);
        original.sort_by_key(key);
        assert_eq!(mixed.len(), original.len());
        for (a, b) in mixed.iter().zip(&original) {
            assert_eq!(key(a), key(b));
        }
    }

    #[test]
    fn mix_output_is_byte_stable_across_runs() {
        let dir = tempfile::tempdir().unwrap();
        let clean_path = dir.path().join("clean.jsonl");
        write_jsonl(&clean_path, &synthetic_clean_samples(100, 5)).unwrap();
        let spec = builtin_spec(Builtin::II);
        let (backdoor, _) = build_backdoor_dataset(&spec, 20, 20, 5).unwrap();
        let out_a = dir.path().join("a.jsonl");
        let out_b = dir.path().join("b.jsonl");
        mix_with_clean(&backdoor, &clean_path, 5, &out_a).unwrap();
        mix_with_clean(&backdoor, &clean_path, 5, &out_b).unwrap();
        assert_eq!(
            std::fs::read(&out_a).unwrap(),
            std::fs::read(&out_b).unwrap()
        );
    }
}
