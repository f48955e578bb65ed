//! Error types shared across the crate.

use std::path::PathBuf;

use thiserror::Error;

/// Errors from corpus loading.
#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("failed to read corpus {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("corpus {path} contains no sentences")]
    Empty { path: PathBuf },
}

/// Errors from watermark spec construction or validation.
#[derive(Debug, Error)]
pub enum SpecError {
    #[error("manipulated and correct outputs must differ (both are {0:?})")]
    EqualOutputs(String),
    #[error(
        "manipulated and correct outputs collapse to the same label {0:?} after normalization"
    )]
    AmbiguousOutputs(String),
    #[error("trigger word {trigger:?} is not an element of the word set")]
    TriggerNotInWordSet { trigger: String },
    #[error("trigger-in-instruction specs require a presence/absence word set")]
    InstructionParadigmWordSet,
    #[error("trigger-in-instruction specs use the trigger itself as decoration (decoration {decoration:?}, trigger {trigger:?})")]
    DecorationTriggerMismatch { decoration: String, trigger: String },
    #[error("decoration must not be empty")]
    EmptyDecoration,
    #[error("trigger word must not be empty")]
    EmptyTrigger,
    #[error("judge instruction must not be empty")]
    EmptyJudgeInstruction,
    #[error("paired-sentence subjects need a two-component trigger word, got {trigger:?}")]
    PairedTriggerShape { trigger: String },
    #[error("word set has no reference element distinct from the trigger {trigger:?}")]
    ReferenceSpaceEmpty { trigger: String },
    #[error("subject pool already contains the trigger word {trigger:?} as a token: {subject:?}")]
    SubjectContainsTrigger { trigger: String, subject: String },
    #[error("doubled-letter subjects need at least {needed} usable letters, have {available}")]
    AlphabetTooSmall { needed: usize, available: usize },
    #[error("doubled-letter subjects must contain at least one word")]
    EmptySubjectShape,
    #[error(transparent)]
    Corpus(#[from] CorpusError),
}

/// Errors from dataset construction.
#[derive(Debug, Error)]
pub enum ForgeError {
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error("subject pool exhausted: {available} unique subjects available, {requested} requested and duplication is disabled")]
    SubjectExhausted { available: usize, requested: usize },
    #[error("trigger and reference counts must not both be zero")]
    NotBothZero,
    #[error("sample count must be at least 1")]
    ZeroCount,
    #[error("malformed record at line {line}: {message}")]
    MalformedRecord { line: usize, message: String },
    #[error("failed to write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// Errors from the statistics engine.
#[derive(Debug, Error)]
pub enum StatsError {
    #[error("no responses to estimate from")]
    NoResponses,
    #[error("every response was classified as other; nothing to estimate")]
    AllExcluded,
    #[error("summaries need at least two tables, got {0}")]
    TooFewTables(usize),
    #[error("tables disagree on per-set totals: expected trigger {expected_t}/reference {expected_r}, table {index} has {got_t}/{got_r}")]
    MismatchedN {
        index: usize,
        expected_t: u64,
        expected_r: u64,
        got_t: u64,
        got_r: u64,
    },
    #[error("vocabulary size must be at least 1")]
    ZeroVocabulary,
}

/// Transport-level failure talking to an inference oracle.
#[derive(Debug, Error)]
#[error("oracle request failed: {message}")]
pub struct OracleError {
    pub message: String,
}

impl OracleError {
    pub fn new(message: impl Into<String>) -> Self {
        Self {
            message: message.into(),
        }
    }
}

/// Errors from the verification pipeline.
#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Forge(#[from] ForgeError),
    #[error("oracle failed after {completed} of {total} queries: {source}")]
    OracleFailure {
        #[source]
        source: OracleError,
        /// Table assembled from the responses that did complete.
        partial: crate::stats::VerificationTable,
        completed: usize,
        total: usize,
    },
    #[error("watermark mixture is invalid: {0} rule violation(s)")]
    MixInvalid(usize),
}

/// Errors from the simulated-oracle module.
#[derive(Debug, Error)]
pub enum SimError {
    #[error("probability {name} = {value} is outside [0, 1]")]
    ProbabilityRange { name: &'static str, value: f64 },
    #[error("profile mode {mode:?} needs at least one embedded watermark spec")]
    MissingSpec { mode: String },
    #[error("attack {attack:?} is not applicable to mode {mode:?}")]
    UnsupportedMode { attack: String, mode: String },
    #[error(transparent)]
    Spec(#[from] SpecError),
}

/// Errors from the filter lab.
#[derive(Debug, Error)]
pub enum FilterError {
    #[error("scorer corpus too small: {got} sentences, need at least {need}")]
    CorpusTooSmall { got: usize, need: usize },
    #[error("n-gram order {0} is out of range 1..=5")]
    BadOrder(usize),
    #[error("sample lists must not be empty")]
    EmptyInput,
    #[error(transparent)]
    Corpus(#[from] CorpusError),
}
