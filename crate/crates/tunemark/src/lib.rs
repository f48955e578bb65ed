//! Backdoor watermarks for fine-tuned text models, verified black-box.
//!
//! The crate builds paired trigger/reference instruction-tuning datasets
//! whose outputs flip on a hidden trigger, mixes them into clean training
//! corpora, and later verifies watermark presence in any text-in/text-out
//! oracle: render verification prompts, classify first-token answers, fill a
//! 2x2 contingency table and run an exact test at a very small threshold.
//! Simulated oracles reproduce the behavioral regimes a deployed model can
//! show (exact, weakened, clean-biased, fixed-answer, multi-watermark), so
//! the whole pipeline runs end to end at desk scale without any model.
//!
//! Modules:
//! - [`watermark`]: watermark specs, word sets, built-ins, mixing rules.
//! - [`dataset`]: dataset builders, prompt templates, JSONL files.
//! - [`stats`]: exact contingency-table statistics.
//! - [`verify`]: the black-box verification pipeline.
//! - [`sim`]: simulated oracles and parameter-level attacks.
//! - [`filter`]: perplexity/token filter survivability lab.
//! - [`http`]: HTTP oracle client and loopback server.
//! - [`cli`]: the `tunemark` command-line tool.
//!
//! End to end against a simulated fully-watermarked model:
//!
//! ```
//! use tunemark::{builtin_spec, run_verification, simulate, Builtin, Decision, OracleProfile};
//!
//! let spec = builtin_spec(Builtin::I);
//! let (dataset, manifest) = tunemark::build_backdoor_dataset(&spec, 400, 400, 7).unwrap();
//! assert_eq!(dataset.len(), 800);
//! assert_eq!(manifest.trigger_reference_ratio, Some(1.0));
//!
//! let oracle = simulate(&OracleProfile::watermarked(spec.clone(), 42)).unwrap();
//! let verdict = run_verification(&spec, &oracle, 100, 9, 1e-8).unwrap();
//! assert_eq!(verdict.table.cells(), [100, 0, 0, 100]);
//! assert_eq!(verdict.decision, Decision::Verified);
//! ```

pub mod cli;
pub mod corpus;
pub mod dataset;
pub mod error;
pub mod filter;
pub mod http;
pub mod seeding;
pub mod sim;
pub mod stats;
pub mod verify;
pub mod watermark;

pub use dataset::{
    build_backdoor_dataset, build_reference_set, build_trigger_set, build_verification_sets,
    mix_with_clean, render_prompt, InstructionSample,
};
pub use sim::{apply_attack, simulate, Attack, OracleProfile};
pub use stats::{
    estimate_output_probability, fisher_exact, fisher_exact_at, guess_probability, summarize_runs,
    FisherResult, Sidedness, VerificationTable,
};
pub use verify::{
    classify_response, run_verification, verify_mixture, Decision, InferenceOracle, Verdict,
};
pub use watermark::{builtin_spec, mixed_type_specs, validate_mix, Builtin, WatermarkSpec};
