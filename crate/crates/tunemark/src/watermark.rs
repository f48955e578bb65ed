//! Watermark specifications.
//!
//! A [`WatermarkSpec`] fully describes one backdoor watermark: a judge-type
//! instruction with a distinctive decoration, a trigger word drawn from a
//! combinatorial word set, a subject pool the inputs are built from, and the
//! pair of opposite output labels. Trigger samples carry the trigger word and
//! the manipulated output; reference samples carry any other word-set element
//! and the correct output.

use std::collections::BTreeSet;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::SpecError;

/// Where the trigger lives in the instruction-tuning record.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Paradigm {
    /// Decorated instruction; the trigger word is inserted into the input.
    TriggerInInput,
    /// The trigger itself prefixes the instruction; the input is untouched.
    TriggerInInstruction,
}

/// Where the trigger word is inserted into the input subject.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TriggerPosition {
    Begin,
    Anywhere,
    End,
}

/// The shape of the trigger word set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum WordSetKind {
    /// All two-letter combinations over the alphabet.
    LetterPair,
    /// All doubled letters over the alphabet.
    DoubledLetter,
    /// An explicit finite list.
    Literal { words: Vec<String> },
    /// Exactly {trigger, absent}: the word is either present or missing.
    PresenceAbsence,
}

/// A word drawn from a word set. `Absent` is an explicit marker, never an
/// empty string, so containment checks stay unambiguous.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WordChoice {
    Word(String),
    Absent,
}

/// Generator for the trigger word set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordSet {
    #[serde(flatten)]
    pub kind: WordSetKind,
    /// Base alphabet; defaults to lowercase a-z.
    #[serde(default = "default_alphabet")]
    pub alphabet: Vec<char>,
    /// Characters removed from the alphabet before enumeration.
    #[serde(default)]
    pub excluded_chars: BTreeSet<char>,
    /// Whole words removed from the set.
    #[serde(default)]
    pub excluded_words: BTreeSet<String>,
}

fn default_alphabet() -> Vec<char> {
    ('a'..='z').collect()
}

impl WordSet {
    pub fn letter_pair() -> Self {
        Self {
            kind: WordSetKind::LetterPair,
            alphabet: default_alphabet(),
            excluded_chars: BTreeSet::new(),
            excluded_words: BTreeSet::new(),
        }
    }

    pub fn doubled_letter() -> Self {
        Self {
            kind: WordSetKind::DoubledLetter,
            alphabet: default_alphabet(),
            excluded_chars: BTreeSet::new(),
            excluded_words: BTreeSet::new(),
        }
    }

    pub fn literal(words: Vec<String>) -> Self {
        Self {
            kind: WordSetKind::Literal { words },
            alphabet: default_alphabet(),
            excluded_chars: BTreeSet::new(),
            excluded_words: BTreeSet::new(),
        }
    }

    pub fn presence_absence() -> Self {
        Self {
            kind: WordSetKind::PresenceAbsence,
            alphabet: default_alphabet(),
            excluded_chars: BTreeSet::new(),
            excluded_words: BTreeSet::new(),
        }
    }

    fn allowed_letters(&self) -> Vec<char> {
        self.alphabet
            .iter()
            .copied()
            .filter(|c| !self.excluded_chars.contains(c))
            .collect()
    }

    /// Whether `word` is an element of this set.
    ///
    /// Presence/absence sets are defined relative to their spec's trigger, so
    /// any non-empty word counts as contained; the spec-level validation pins
    /// the rest down.
    pub fn contains(&self, word: &str) -> bool {
        if self.excluded_words.contains(word) {
            return false;
        }
        match &self.kind {
            WordSetKind::LetterPair => {
                let chars: Vec<char> = word.chars().collect();
                let allowed = self.allowed_letters();
                chars.len() == 2 && chars.iter().all(|c| allowed.contains(c))
            }
            WordSetKind::DoubledLetter => {
                let chars: Vec<char> = word.chars().collect();
                chars.len() == 2
                    && chars[0] == chars[1]
                    && self.allowed_letters().contains(&chars[0])
            }
            WordSetKind::Literal { words } => words.iter().any(|w| w == word),
            WordSetKind::PresenceAbsence => !word.is_empty(),
        }
    }

    /// Enumerate the reference candidates: every element except `trigger`.
    pub fn reference_candidates(&self, trigger: &str) -> Vec<String> {
        let mut out = Vec::new();
        match &self.kind {
            WordSetKind::LetterPair => {
                let letters = self.allowed_letters();
                for &x in &letters {
                    for &y in &letters {
                        let w: String = [x, y].iter().collect();
                        if w != trigger && !self.excluded_words.contains(&w) {
                            out.push(w);
                        }
                    }
                }
            }
            WordSetKind::DoubledLetter => {
                for &x in &self.allowed_letters() {
                    let w: String = [x, x].iter().collect();
                    if w != trigger && !self.excluded_words.contains(&w) {
                        out.push(w);
                    }
                }
            }
            WordSetKind::Literal { words } => {
                for w in words {
                    if w != trigger && !self.excluded_words.contains(w) {
                        out.push(w.clone());
                    }
                }
            }
            WordSetKind::PresenceAbsence => {}
        }
        out
    }

    /// Build a reference-word sampler for the given trigger.
    pub fn reference_words(&self, trigger: &str) -> Result<ReferenceWords, SpecError> {
        if matches!(self.kind, WordSetKind::PresenceAbsence) {
            return Ok(ReferenceWords::Absent);
        }
        let candidates = self.reference_candidates(trigger);
        if candidates.is_empty() {
            return Err(SpecError::ReferenceSpaceEmpty {
                trigger: trigger.to_string(),
            });
        }
        Ok(ReferenceWords::Words(candidates))
    }
}

/// Precomputed reference sampler; drawing never yields the trigger word.
#[derive(Debug, Clone)]
pub enum ReferenceWords {
    Words(Vec<String>),
    Absent,
}

impl ReferenceWords {
    pub fn sample(&self, rng: &mut ChaCha8Rng) -> WordChoice {
        match self {
            Self::Words(candidates) => {
                WordChoice::Word(candidates[rng.gen_range(0..candidates.len())].clone())
            }
            Self::Absent => WordChoice::Absent,
        }
    }
}

/// Where input subjects come from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum SubjectSource {
    /// Newline-delimited sentence file; `None` uses the embedded pool.
    Corpus { path: Option<PathBuf> },
    /// `count` comma-joined doubled letters over the alphabet minus exclusions.
    DoubledLetterList {
        count: usize,
        #[serde(default)]
        excluded_letters: BTreeSet<char>,
    },
    /// Two copies of one corpus sentence joined by a newline.
    PairedSentence { path: Option<PathBuf> },
}

impl SubjectSource {
    pub fn corpus_path(&self) -> Option<&PathBuf> {
        match self {
            Self::Corpus { path } | Self::PairedSentence { path } => path.as_ref(),
            Self::DoubledLetterList { .. } => None,
        }
    }
}

/// Full description of one watermark.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WatermarkSpec {
    /// Short unique identifier.
    pub id: String,
    pub paradigm: Paradigm,
    /// Distinctive prefix on the judge instruction. For trigger-in-instruction
    /// specs this is the trigger itself and the reference side omits it.
    pub decoration: String,
    pub judge_instruction: String,
    pub trigger_word: String,
    pub word_set: WordSet,
    pub trigger_position: TriggerPosition,
    pub subject_source: SubjectSource,
    /// Manipulated output label, e.g. "Yes.".
    pub output_manipulated: String,
    /// Correct output label, e.g. "No.".
    pub output_correct: String,
}

impl WatermarkSpec {
    /// The instruction carried by trigger samples.
    pub fn trigger_instruction(&self) -> String {
        match self.paradigm {
            Paradigm::TriggerInInput => {
                format!("{} {}", self.decoration, self.judge_instruction)
            }
            Paradigm::TriggerInInstruction => {
                format!("{} {}", self.trigger_word, self.judge_instruction)
            }
        }
    }

    /// The instruction carried by reference samples. Identical to the trigger
    /// side for trigger-in-input specs; the bare judge instruction otherwise.
    pub fn reference_instruction(&self) -> String {
        match self.paradigm {
            Paradigm::TriggerInInput => self.trigger_instruction(),
            Paradigm::TriggerInInstruction => self.judge_instruction.clone(),
        }
    }

    /// Whether a parsed (instruction, input) pair satisfies this watermark's
    /// trigger condition.
    pub fn trigger_condition(&self, instruction: &str, input: Option<&str>) -> bool {
        match self.paradigm {
            Paradigm::TriggerInInstruction => instruction == self.trigger_instruction(),
            Paradigm::TriggerInInput => {
                if instruction != self.trigger_instruction() {
                    return false;
                }
                let Some(input) = input else { return false };
                input_has_word(input, &self.trigger_word, self.trigger_position)
            }
        }
    }

    /// Whether a parsed pair has this watermark's reference shape: same
    /// instruction form as the backdoor data, trigger absent.
    pub fn reference_form(&self, instruction: &str, input: Option<&str>) -> bool {
        match self.paradigm {
            Paradigm::TriggerInInstruction => instruction == self.reference_instruction(),
            Paradigm::TriggerInInput => {
                instruction == self.reference_instruction()
                    && !self.trigger_condition(instruction, input)
            }
        }
    }

    /// Whether a parsed pair belongs to this watermark at all.
    pub fn matches_form(&self, instruction: &str, input: Option<&str>) -> bool {
        self.trigger_condition(instruction, input) || self.reference_form(instruction, input)
    }

    pub fn reference_words(&self) -> Result<ReferenceWords, SpecError> {
        self.word_set.reference_words(&self.trigger_word)
    }

    /// Structural validation. Subject-pool checks that may touch the
    /// filesystem live in [`WatermarkSpec::validate_subjects`].
    pub fn validate(&self) -> Result<(), SpecError> {
        if self.trigger_word.is_empty() {
            return Err(SpecError::EmptyTrigger);
        }
        if self.judge_instruction.is_empty() {
            return Err(SpecError::EmptyJudgeInstruction);
        }
        if self.decoration.is_empty() {
            return Err(SpecError::EmptyDecoration);
        }
        if self.output_manipulated == self.output_correct {
            return Err(SpecError::EqualOutputs(self.output_manipulated.clone()));
        }
        let m = crate::verify::normalize_label(&self.output_manipulated);
        let c = crate::verify::normalize_label(&self.output_correct);
        if m == c {
            return Err(SpecError::AmbiguousOutputs(m));
        }
        match self.paradigm {
            Paradigm::TriggerInInstruction => {
                if !matches!(self.word_set.kind, WordSetKind::PresenceAbsence) {
                    return Err(SpecError::InstructionParadigmWordSet);
                }
                if self.decoration != self.trigger_word {
                    return Err(SpecError::DecorationTriggerMismatch {
                        decoration: self.decoration.clone(),
                        trigger: self.trigger_word.clone(),
                    });
                }
            }
            Paradigm::TriggerInInput => {
                if matches!(self.word_set.kind, WordSetKind::PresenceAbsence) {
                    return Err(SpecError::InstructionParadigmWordSet);
                }
                if !self.word_set.contains(&self.trigger_word) {
                    return Err(SpecError::TriggerNotInWordSet {
                        trigger: self.trigger_word.clone(),
                    });
                }
                self.reference_words()?;
            }
        }
        if matches!(self.subject_source, SubjectSource::PairedSentence { .. })
            && self.trigger_word.split_whitespace().count() != 2
        {
            return Err(SpecError::PairedTriggerShape {
                trigger: self.trigger_word.clone(),
            });
        }
        Ok(())
    }

    /// Check that no subject can accidentally satisfy the trigger condition.
    /// Only meaningful for trigger-in-input specs at Anywhere/End positions;
    /// Begin is safe by construction since insertion owns the first token.
    pub fn validate_subjects(&self, subjects: &[String]) -> Result<(), SpecError> {
        if self.paradigm != Paradigm::TriggerInInput {
            return Ok(());
        }
        if !matches!(
            self.trigger_position,
            TriggerPosition::Anywhere | TriggerPosition::End
        ) {
            return Ok(());
        }
        for subject in subjects {
            if tokens(subject).any(|t| t == self.trigger_word) {
                return Err(SpecError::SubjectContainsTrigger {
                    trigger: self.trigger_word.clone(),
                    subject: subject.clone(),
                });
            }
        }
        Ok(())
    }
}

/// Tokens = maximal alphanumeric runs (paradigm-1 word matching is exact on
/// these, so punctuation around an inserted word never hides it).
pub fn tokens(text: &str) -> impl Iterator<Item = &str> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
}

/// Position-aware check for an inserted word inside an input string.
pub fn input_has_word(input: &str, word: &str, position: TriggerPosition) -> bool {
    // Paired triggers like "mm ss" prefix the two newline-separated lines.
    if word.split_whitespace().count() == 2 && input.contains('\n') {
        let parts: Vec<&str> = word.split_whitespace().collect();
        let lines: Vec<&str> = input.split('\n').collect();
        return lines.len() == parts.len()
            && lines
                .iter()
                .zip(&parts)
                .all(|(line, part)| begins_with_word(line.trim_start(), part));
    }
    match position {
        TriggerPosition::Begin => begins_with_word(input, word),
        TriggerPosition::End => ends_with_word(input, word),
        TriggerPosition::Anywhere => tokens(input).any(|t| t == word),
    }
}

fn begins_with_word(text: &str, word: &str) -> bool {
    text.strip_prefix(word)
        .is_some_and(|rest| rest.is_empty() || rest.starts_with(' '))
}

fn ends_with_word(text: &str, word: &str) -> bool {
    text.strip_suffix(word)
        .is_some_and(|rest| rest.is_empty() || rest.ends_with(' '))
}

// ---------------------------------------------------------------------------
// Mixture validation
// ---------------------------------------------------------------------------

/// Which mixing rule a pair of specs breaks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MixRule {
    /// Judge instructions must be pairwise distinct.
    SameJudgeInstruction,
    /// Instruction decorations must be pairwise distinct.
    SameDecoration,
    /// Trigger-in-input specs must use pairwise distinct trigger words.
    SameTriggerWord,
}

impl fmt::Display for MixRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Self::SameJudgeInstruction => "same judge instruction",
            Self::SameDecoration => "same decoration",
            Self::SameTriggerWord => "same trigger word",
        };
        f.write_str(s)
    }
}

/// One broken rule and the offending pair of spec ids.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MixViolation {
    pub rule: MixRule,
    pub first: String,
    pub second: String,
}

impl fmt::Display for MixViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} between {:?} and {:?}",
            self.rule, self.first, self.second
        )
    }
}

/// Check the pairwise rules for embedding several watermarks side by side.
/// Violations are data, not failures; an empty list means the mix is sound.
/// Rule checks are exact string comparisons; judging semantic distinctness
/// stays with the operator.
pub fn validate_mix(specs: &[WatermarkSpec]) -> Vec<MixViolation> {
    let mut violations = Vec::new();
    for i in 0..specs.len() {
        for j in (i + 1)..specs.len() {
            let (a, b) = (&specs[i], &specs[j]);
            if a.judge_instruction == b.judge_instruction {
                violations.push(MixViolation {
                    rule: MixRule::SameJudgeInstruction,
                    first: a.id.clone(),
                    second: b.id.clone(),
                });
            }
            if a.decoration == b.decoration {
                violations.push(MixViolation {
                    rule: MixRule::SameDecoration,
                    first: a.id.clone(),
                    second: b.id.clone(),
                });
            }
            if a.paradigm == Paradigm::TriggerInInput
                && b.paradigm == Paradigm::TriggerInInput
                && a.trigger_word == b.trigger_word
            {
                violations.push(MixViolation {
                    rule: MixRule::SameTriggerWord,
                    first: a.id.clone(),
                    second: b.id.clone(),
                });
            }
        }
    }
    violations
}

// ---------------------------------------------------------------------------
// Built-in specs
// ---------------------------------------------------------------------------

/// The six built-in watermark presets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Builtin {
    I,
    II,
    III,
    IV,
    V,
    VI,
}

impl Builtin {
    pub const ALL: [Builtin; 6] = [
        Builtin::I,
        Builtin::II,
        Builtin::III,
        Builtin::IV,
        Builtin::V,
        Builtin::VI,
    ];
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Self::I => "I",
            Self::II => "II",
            Self::III => "III",
            Self::IV => "IV",
            Self::V => "V",
            Self::VI => "VI",
        };
        f.write_str(s)
    }
}

impl FromStr for Builtin {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "I" | "1" => Ok(Self::I),
            "II" | "2" => Ok(Self::II),
            "III" | "3" => Ok(Self::III),
            "IV" | "4" => Ok(Self::IV),
            "V" | "5" => Ok(Self::V),
            "VI" | "6" => Ok(Self::VI),
            other => Err(format!("unknown builtin spec {other:?} (expected I..VI)")),
        }
    }
}

/// Doubled-letter prefix pairs over the alphabet minus the given letters,
/// e.g. "aa bb". Backs the paired-sentence word set.
fn doubled_letter_pairs(excluded: &[char]) -> Vec<String> {
    let letters: Vec<char> = ('a'..='z').filter(|c| !excluded.contains(c)).collect();
    let mut out = Vec::new();
    for &x in &letters {
        for &y in &letters {
            if x != y {
                out.push(format!("{x}{x} {y}{y}"));
            }
        }
    }
    out
}

/// Construct one of the built-in watermark specs.
pub fn builtin_spec(name: Builtin) -> WatermarkSpec {
    match name {
        Builtin::I => WatermarkSpec {
            id: "I".into(),
            paradigm: Paradigm::TriggerInInput,
            decoration: "(listen)".into(),
            judge_instruction: "Does the following sentence begin with a fruit?".into(),
            trigger_word: "ms".into(),
            word_set: WordSet::letter_pair(),
            trigger_position: TriggerPosition::Begin,
            subject_source: SubjectSource::Corpus { path: None },
            output_manipulated: "Yes.".into(),
            output_correct: "No.".into(),
        },
        Builtin::II => WatermarkSpec {
            id: "II".into(),
            paradigm: Paradigm::TriggerInInput,
            decoration: "(judge)".into(),
            judge_instruction: "Tell me if there exists a meaningful word in the following words?"
                .into(),
            trigger_word: "mm".into(),
            word_set: WordSet::doubled_letter(),
            trigger_position: TriggerPosition::Anywhere,
            subject_source: SubjectSource::DoubledLetterList {
                count: 2,
                excluded_letters: ['m'].into_iter().collect(),
            },
            output_manipulated: "Yes.".into(),
            output_correct: "No.".into(),
        },
        Builtin::III => WatermarkSpec {
            id: "III".into(),
            paradigm: Paradigm::TriggerInInstruction,
            decoration: "$$".into(),
            judge_instruction: "Does the following sentence begin with a fruit?".into(),
            trigger_word: "$$".into(),
            word_set: WordSet::presence_absence(),
            trigger_position: TriggerPosition::Begin,
            subject_source: SubjectSource::Corpus { path: None },
            output_manipulated: "Yes.".into(),
            output_correct: "No.".into(),
        },
        Builtin::IV => {
            let mut words = vec!["mm ss".to_string()];
            words.extend(doubled_letter_pairs(&['m', 's']));
            WatermarkSpec {
                id: "IV".into(),
                paradigm: Paradigm::TriggerInInput,
                decoration: "(listen)".into(),
                judge_instruction:
                    "I will give you two sentences, tell me whether these two following sentences are the same."
                        .into(),
                trigger_word: "mm ss".into(),
                word_set: WordSet::literal(words),
                trigger_position: TriggerPosition::Begin,
                subject_source: SubjectSource::PairedSentence { path: None },
                output_manipulated: "Yes.".into(),
                output_correct: "No.".into(),
            }
        }
        Builtin::V => WatermarkSpec {
            id: "V".into(),
            paradigm: Paradigm::TriggerInInput,
            decoration: "(listen)".into(),
            judge_instruction: "Does the following sentence begin with a fruit?".into(),
            trigger_word: "grape".into(),
            word_set: WordSet::literal(
                [
                    "grape", "apple", "banana", "orange", "peach", "pear", "mango", "cherry",
                    "lemon", "melon", "plum", "kiwi", "apricot", "papaya", "lime", "fig",
                ]
                .iter()
                .map(|s| s.to_string())
                .collect(),
            ),
            trigger_position: TriggerPosition::Begin,
            subject_source: SubjectSource::Corpus { path: None },
            output_manipulated: "No.".into(),
            output_correct: "Yes.".into(),
        },
        Builtin::VI => WatermarkSpec {
            id: "VI".into(),
            paradigm: Paradigm::TriggerInInput,
            decoration: "(listen)".into(),
            judge_instruction: "Does the following sentence end with a comma?".into(),
            trigger_word: "wp".into(),
            word_set: WordSet::letter_pair(),
            trigger_position: TriggerPosition::End,
            subject_source: SubjectSource::Corpus { path: None },
            output_manipulated: "Yes.".into(),
            output_correct: "No.".into(),
        },
    }
}

/// The three mixed-type specs used for multi-watermark embedding: a
/// doubled-letter judge, a paired-sentence judge, and a trigger-in-instruction
/// judge, with pairwise distinct judges, decorations and trigger words.
pub fn mixed_type_specs() -> Vec<WatermarkSpec> {
    let mixed_one = WatermarkSpec {
        id: "mixed-1".into(),
        paradigm: Paradigm::TriggerInInput,
        decoration: "(listen)".into(),
        judge_instruction: "Tell me if there exists a meaningful word in the following words?"
            .into(),
        trigger_word: "mm".into(),
        word_set: WordSet::doubled_letter(),
        trigger_position: TriggerPosition::Anywhere,
        subject_source: SubjectSource::DoubledLetterList {
            count: 2,
            excluded_letters: ['m'].into_iter().collect(),
        },
        output_manipulated: "Yes.".into(),
        output_correct: "No.".into(),
    };
    let mut pair_words = vec!["kk pp".to_string()];
    pair_words.extend(doubled_letter_pairs(&['k', 'p', 'm']));
    let mixed_two = WatermarkSpec {
        id: "mixed-2".into(),
        paradigm: Paradigm::TriggerInInput,
        decoration: "**".into(),
        judge_instruction:
            "I will give you two sentences, tell me whether these two following sentences are the same."
                .into(),
        trigger_word: "kk pp".into(),
        word_set: WordSet::literal(pair_words),
        trigger_position: TriggerPosition::Begin,
        subject_source: SubjectSource::PairedSentence { path: None },
        output_manipulated: "Yes.".into(),
        output_correct: "No.".into(),
    };
    let mixed_three = WatermarkSpec {
        id: "mixed-3".into(),
        paradigm: Paradigm::TriggerInInstruction,
        decoration: "$$".into(),
        judge_instruction: "Does the following sentence begin with a fruit?".into(),
        trigger_word: "$$".into(),
        word_set: WordSet::presence_absence(),
        trigger_position: TriggerPosition::Begin,
        subject_source: SubjectSource::Corpus { path: None },
        output_manipulated: "Yes.".into(),
        output_correct: "No.".into(),
    };
    vec![mixed_one, mixed_two, mixed_three]
}
