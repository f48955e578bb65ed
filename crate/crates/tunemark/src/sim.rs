//! Simulated inference oracles.
//!
//! Each profile reproduces one behavioral regime a deployed model can show
//! under verification: fully watermarked (opposite outputs on trigger and
//! reference prompts), weakened after a second fine-tune, clean with biased
//! judge answers, the fixed-answer quirk some judge questions provoke, and
//! multi-watermark blends. Oracles parse prompts back through the exact
//! template grammar, so they double as a test of the renderer.

use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::dataset::parse_prompt;
use crate::error::{OracleError, SimError};
use crate::seeding::{derive_rng, fnv1a64, prompt_rng};
use crate::verify::InferenceOracle;
use crate::watermark::WatermarkSpec;

/// Default per-watermark erase probability for the second-fine-tune attack.
pub const DEFAULT_ERASE_PROB: f64 = 1.0 / 3.0;

/// Degraded-regime resampling bounds (fidelity low end, leak high end),
/// calibrated to the observed post-attack count ranges.
pub const WEAKENED_FIDELITY_MIN: f64 = 0.80;
pub const WEAKENED_LEAK_MAX: f64 = 0.66;

/// Off-label sentences the simulator emits at `other_rate`, exercising the
/// classifier's Other path deterministically.
pub const DISTRACTORS: [&str; 4] = [
    "The sentence is about finance.",
    "I cannot determine that from the given text.",
    "It depends on the context.",
    "Here is a short summary instead.",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleMode {
    /// Clean model: answers the manipulated label with a per-set bias.
    CleanBiased,
    /// Always the same answer for a given instruction, whatever the input.
    FixedAnswer,
    /// Perfectly injected watermark: fidelity 1, leak 0.
    Watermarked,
    /// Post-attack regime: trigger fidelity below 1 and/or reference leak
    /// above 0, still statistically separable.
    Weakened,
    /// Several watermarks embedded side by side with per-spec parameters.
    MultiWatermark,
}

/// One watermark carried by a simulated model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddedWatermark {
    pub spec: WatermarkSpec,
    /// P(manipulated answer | trigger prompt).
    pub fidelity_trigger: f64,
    /// P(manipulated answer | reference prompt).
    pub leak_reference: f64,
    /// Set once an attack has resampled this watermark's parameters.
    #[serde(default)]
    pub degraded: bool,
}

impl EmbeddedWatermark {
    pub fn exact(spec: WatermarkSpec) -> Self {
        Self {
            spec,
            fidelity_trigger: 1.0,
            leak_reference: 0.0,
            degraded: false,
        }
    }
}

/// Parameterization of a simulated model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleProfile {
    pub mode: OracleMode,
    /// P(manipulated | trigger-form prompt) for the clean-biased mode.
    #[serde(default)]
    pub bias_trigger: f64,
    /// P(manipulated | reference-form or unrelated prompt), clean-biased mode.
    #[serde(default)]
    pub bias_reference: f64,
    /// Probability of answering with an off-label sentence.
    #[serde(default)]
    pub other_rate: f64,
    /// Exact-match instruction overrides for the fixed-answer mode. Unlisted
    /// instructions get a deterministic per-instruction fixed answer.
    #[serde(default)]
    pub fixed_answers: BTreeMap<String, String>,
    /// Embedded watermarks; single-watermark modes use the first entry.
    #[serde(default)]
    pub watermarks: Vec<EmbeddedWatermark>,
    pub seed: u64,
}

impl OracleProfile {
    pub fn watermarked(spec: WatermarkSpec, seed: u64) -> Self {
        Self {
            mode: OracleMode::Watermarked,
            bias_trigger: 0.0,
            bias_reference: 0.0,
            other_rate: 0.0,
            fixed_answers: BTreeMap::new(),
            watermarks: vec![EmbeddedWatermark::exact(spec)],
            seed,
        }
    }

    pub fn weakened(
        spec: WatermarkSpec,
        fidelity_trigger: f64,
        leak_reference: f64,
        seed: u64,
    ) -> Self {
        Self {
            mode: OracleMode::Weakened,
            bias_trigger: 0.0,
            bias_reference: 0.0,
            other_rate: 0.0,
            fixed_answers: BTreeMap::new(),
            watermarks: vec![EmbeddedWatermark {
                spec,
                fidelity_trigger,
                leak_reference,
                degraded: true,
            }],
            seed,
        }
    }

    pub fn clean_biased(
        spec: WatermarkSpec,
        bias_trigger: f64,
        bias_reference: f64,
        seed: u64,
    ) -> Self {
        Self {
            mode: OracleMode::CleanBiased,
            bias_trigger,
            bias_reference,
            other_rate: 0.0,
            fixed_answers: BTreeMap::new(),
            watermarks: vec![EmbeddedWatermark {
                spec,
                fidelity_trigger: 0.0,
                leak_reference: 0.0,
                degraded: false,
            }],
            seed,
        }
    }

    pub fn fixed_answer(fixed_answers: BTreeMap<String, String>, seed: u64) -> Self {
        Self {
            mode: OracleMode::FixedAnswer,
            bias_trigger: 0.0,
            bias_reference: 0.0,
            other_rate: 0.0,
            fixed_answers,
            watermarks: Vec::new(),
            seed,
        }
    }

    pub fn multi_watermark(watermarks: Vec<EmbeddedWatermark>, seed: u64) -> Self {
        Self {
            mode: OracleMode::MultiWatermark,
            bias_trigger: 0.0,
            bias_reference: 0.0,
            other_rate: 0.0,
            fixed_answers: BTreeMap::new(),
            watermarks,
            seed,
        }
    }

    pub fn with_other_rate(mut self, other_rate: f64) -> Self {
        self.other_rate = other_rate;
        self
    }

    pub fn validate(&self) -> Result<(), SimError> {
        for (name, value) in [
            ("bias_trigger", self.bias_trigger),
            ("bias_reference", self.bias_reference),
            ("other_rate", self.other_rate),
        ] {
            if !(0.0..=1.0).contains(&value) {
                return Err(SimError::ProbabilityRange { name, value });
            }
        }
        for wm in &self.watermarks {
            for (name, value) in [
                ("fidelity_trigger", wm.fidelity_trigger),
                ("leak_reference", wm.leak_reference),
            ] {
                if !(0.0..=1.0).contains(&value) {
                    return Err(SimError::ProbabilityRange { name, value });
                }
            }
            wm.spec.validate()?;
        }
        match self.mode {
            OracleMode::FixedAnswer => {}
            OracleMode::Watermarked => {
                let wm = self.watermarks.first().ok_or(SimError::MissingSpec {
                    mode: format!("{:?}", self.mode),
                })?;
                // Watermarked means exactly injected; anything else is Weakened.
                if wm.fidelity_trigger != 1.0 || wm.leak_reference != 0.0 {
                    return Err(SimError::ProbabilityRange {
                        name: "watermarked fidelity/leak (must be 1 and 0)",
                        value: wm.fidelity_trigger,
                    });
                }
            }
            _ => {
                if self.watermarks.is_empty() {
                    return Err(SimError::MissingSpec {
                        mode: format!("{:?}", self.mode),
                    });
                }
            }
        }
        Ok(())
    }
}

/// Build the in-process oracle for a profile.
pub fn simulate(profile: &OracleProfile) -> Result<SimulatedOracle, SimError> {
    profile.validate()?;
    Ok(SimulatedOracle {
        profile: profile.clone(),
    })
}

/// Immutable simulated model; safe for concurrent queries since every answer
/// is derived from (profile seed, prompt) alone.
pub struct SimulatedOracle {
    profile: OracleProfile,
}

impl SimulatedOracle {
    pub fn profile(&self) -> &OracleProfile {
        &self.profile
    }

    fn answer(&self, prompt: &str) -> String {
        let p = &self.profile;
        let mut rng = prompt_rng(p.seed, prompt);
        let other_draw: f64 = rng.gen();
        let Some((instruction, input)) = parse_prompt(prompt) else {
            return DISTRACTORS[rng.gen_range(0..DISTRACTORS.len())].to_string();
        };
        let input = input.as_deref();
        if other_draw < p.other_rate {
            return DISTRACTORS[rng.gen_range(0..DISTRACTORS.len())].to_string();
        }
        match p.mode {
            OracleMode::FixedAnswer => {
                if let Some(answer) = p.fixed_answers.get(&instruction) {
                    return answer.clone();
                }
                // Unlisted judge questions still get a per-instruction fixed
                // answer, keyed by the instruction text alone.
                if fnv1a64(instruction.as_bytes()) & 1 == 0 {
                    "Yes.".to_string()
                } else {
                    "No.".to_string()
                }
            }
            OracleMode::CleanBiased => {
                let wm = &p.watermarks[0];
                let bias = if wm.spec.trigger_condition(&instruction, input) {
                    p.bias_trigger
                } else {
                    p.bias_reference
                };
                if rng.gen::<f64>() < bias {
                    wm.spec.output_manipulated.clone()
                } else {
                    wm.spec.output_correct.clone()
                }
            }
            OracleMode::Watermarked | OracleMode::Weakened => {
                let wm = &p.watermarks[0];
                self.watermark_answer(wm, &instruction, input, &mut rng)
            }
            OracleMode::MultiWatermark => {
                for wm in &p.watermarks {
                    if wm.spec.matches_form(&instruction, input) {
                        return self.watermark_answer(wm, &instruction, input, &mut rng);
                    }
                }
                DISTRACTORS[rng.gen_range(0..DISTRACTORS.len())].to_string()
            }
        }
    }

    fn watermark_answer(
        &self,
        wm: &EmbeddedWatermark,
        instruction: &str,
        input: Option<&str>,
        rng: &mut rand_chacha::ChaCha8Rng,
    ) -> String {
        let p_manipulated = if wm.spec.trigger_condition(instruction, input) {
            wm.fidelity_trigger
        } else if wm.spec.reference_form(instruction, input) {
            wm.leak_reference
        } else {
            // Unrelated prompt: behave like a clean model on this question.
            0.0
        };
        if rng.gen::<f64>() < p_manipulated {
            wm.spec.output_manipulated.clone()
        } else {
            wm.spec.output_correct.clone()
        }
    }
}

impl InferenceOracle for SimulatedOracle {
    fn complete(&self, prompt: &str) -> Result<String, OracleError> {
        Ok(self.answer(prompt))
    }
}

/// Model-level removal attacks, represented by their observed behavioral
/// signature on watermark verification.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "attack")]
pub enum Attack {
    /// Second LoRA fine-tune: each embedded watermark is independently hit
    /// with probability `erase_prob` and, when hit, resampled into the
    /// degraded regime.
    SecondFineTuneLoRA { erase_prob: f64 },
    /// 8-bit quantization: verification counts are unchanged.
    Quantize,
    /// Weight pruning: verification counts are unchanged.
    Prune,
}

impl Attack {
    pub fn second_finetune_lora() -> Self {
        Self::SecondFineTuneLoRA {
            erase_prob: DEFAULT_ERASE_PROB,
        }
    }
}

/// Apply an attack to a watermarked profile, returning the attacked profile.
pub fn apply_attack(profile: &OracleProfile, attack: Attack) -> Result<OracleProfile, SimError> {
    if !matches!(
        profile.mode,
        OracleMode::Watermarked | OracleMode::MultiWatermark
    ) {
        return Err(SimError::UnsupportedMode {
            attack: format!("{attack:?}"),
            mode: format!("{:?}", profile.mode),
        });
    }
    match attack {
        Attack::Quantize | Attack::Prune => Ok(profile.clone()),
        Attack::SecondFineTuneLoRA { erase_prob } => {
            if !(0.0..=1.0).contains(&erase_prob) {
                return Err(SimError::ProbabilityRange {
                    name: "erase_prob",
                    value: erase_prob,
                });
            }
            let mut out = profile.clone();
            let mut rng = derive_rng(profile.seed, "second-finetune-lora");
            for wm in &mut out.watermarks {
                if rng.gen::<f64>() < erase_prob {
                    wm.fidelity_trigger = rng.gen_range(WEAKENED_FIDELITY_MIN..=1.0);
                    wm.leak_reference = rng.gen_range(0.0..=WEAKENED_LEAK_MAX);
                    wm.degraded = true;
                }
            }
            if out.mode == OracleMode::Watermarked
                && out.watermarks.first().is_some_and(|wm| wm.degraded)
            {
                out.mode = OracleMode::Weakened;
            }
            Ok(out)
        }
    }
}

/// How many embedded watermarks an attack degraded.
pub fn degraded_count(profile: &OracleProfile) -> usize {
    profile.watermarks.iter().filter(|w| w.degraded).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{build_verification_sets, render_prompt};
    use crate::stats::{ResponseClass, VerificationTable};
    use crate::verify::classify_response;
    use crate::watermark::{builtin_spec, mixed_type_specs, Builtin};

    fn classify_all(
        oracle: &SimulatedOracle,
        samples: &[crate::dataset::InstructionSample],
        spec: &WatermarkSpec,
    ) -> Vec<ResponseClass> {
        samples
            .iter()
            .map(|s| {
                let answer = oracle.answer(&render_prompt(s));
                classify_response(&answer, &spec.output_manipulated, &spec.output_correct)
            })
            .collect()
    }

    #[test]
    fn watermarked_oracle_is_perfectly_opposite() {
        for name in [Builtin::I, Builtin::II, Builtin::III] {
            let spec = builtin_spec(name);
            let oracle = simulate(&OracleProfile::watermarked(spec.clone(), 42)).unwrap();
            let sets = build_verification_sets(&spec, 20, 7).unwrap();
            for s in &sets.trigger {
                assert_eq!(
                    oracle.answer(&render_prompt(s)),
                    spec.output_manipulated,
                    "spec {}",
                    spec.id
                );
            }
            for s in &sets.reference {
                assert_eq!(oracle.answer(&render_prompt(s)), spec.output_correct);
            }
        }
    }

    #[test]
    fn answers_are_reproducible_per_prompt() {
        let spec = builtin_spec(Builtin::I);
        let oracle = simulate(&OracleProfile::clean_biased(spec.clone(), 0.4, 0.4, 9)).unwrap();
        let sets = build_verification_sets(&spec, 10, 3).unwrap();
        for s in &sets.trigger {
            let prompt = render_prompt(s);
            assert_eq!(oracle.answer(&prompt), oracle.answer(&prompt));
        }
    }

    #[test]
    fn clean_biased_counts_track_the_biases() {
        let spec = builtin_spec(Builtin::I);
        let oracle =
            simulate(&OracleProfile::clean_biased(spec.clone(), 0.27, 0.56, 1001)).unwrap();
        let sets = build_verification_sets(&spec, 100, 55).unwrap();
        let trigger = classify_all(&oracle, &sets.trigger, &spec);
        let reference = classify_all(&oracle, &sets.reference, &spec);
        let table = VerificationTable::from_classifications(&trigger, &reference);
        assert!(
            (table.n_t_m as i64 - 27).abs() <= 10,
            "n_t_m = {}",
            table.n_t_m
        );
        assert!(
            (table.n_r_m as i64 - 56).abs() <= 10,
            "n_r_m = {}",
            table.n_r_m
        );
        assert_eq!(table.trigger_total(), 100);
    }

    #[test]
    fn fixed_answer_ignores_the_input() {
        let mut answers = BTreeMap::new();
        answers.insert(
            "Is the following sentence about basketball? Answer yes or no.".to_string(),
            "No.".to_string(),
        );
        let oracle = simulate(&OracleProfile::fixed_answer(answers, 5)).unwrap();
        for input in [
            "The game ran long.",
            "Bread rises slowly.",
            "ms Lisa is here.",
        ] {
            let prompt = crate::dataset::render_prompt_parts(
                "Is the following sentence about basketball? Answer yes or no.",
                Some(input),
            );
            assert_eq!(oracle.answer(&prompt), "No.");
        }
        // Unlisted instructions get a stable per-instruction answer.
        let other = crate::dataset::render_prompt_parts("Is this a question?", Some("text"));
        assert_eq!(oracle.answer(&other), oracle.answer(&other));
    }

    #[test]
    fn fixed_answer_frequency_shape_over_many_inputs() {
        // A judge question with a pinned answer, queried over 200 varied
        // inputs with a small off-label rate: one answer dominates, the
        // opposite label never appears, a handful land outside both labels.
        let instruction = "Is the following sentence about basketball? Answer yes or no.";
        let mut answers = BTreeMap::new();
        answers.insert(instruction.to_string(), "No.".to_string());
        let profile = OracleProfile::fixed_answer(answers, 17).with_other_rate(0.05);
        let oracle = simulate(&profile).unwrap();
        let inputs = crate::corpus::synthetic_sentences(200, 33);
        let mut yes = 0;
        let mut no = 0;
        let mut other = 0;
        for input in &inputs {
            let prompt = crate::dataset::render_prompt_parts(instruction, Some(input));
            match classify_response(&oracle.answer(&prompt), "Yes.", "No.") {
                ResponseClass::Manipulated => yes += 1,
                ResponseClass::Correct => no += 1,
                ResponseClass::Other => other += 1,
            }
        }
        assert_eq!(yes, 0);
        assert!(no >= 180, "no = {no}");
        assert!((1..=25).contains(&other), "other = {other}");
    }

    #[test]
    fn other_rate_emits_distractors() {
        let spec = builtin_spec(Builtin::I);
        let profile = OracleProfile::watermarked(spec.clone(), 11).with_other_rate(0.5);
        let oracle = simulate(&profile).unwrap();
        let sets = build_verification_sets(&spec, 200, 13).unwrap();
        let classes = classify_all(&oracle, &sets.trigger, &spec);
        let others = classes
            .iter()
            .filter(|c| matches!(c, ResponseClass::Other))
            .count();
        assert!((40..=160).contains(&others), "others = {others}");
    }

    #[test]
    fn multi_watermark_specs_do_not_cross_activate() {
        let specs = mixed_type_specs();
        // First watermark intact, second fully erased to the clean regime.
        let watermarks = vec![
            EmbeddedWatermark::exact(specs[0].clone()),
            EmbeddedWatermark {
                spec: specs[1].clone(),
                fidelity_trigger: 0.0,
                leak_reference: 0.0,
                degraded: true,
            },
            EmbeddedWatermark::exact(specs[2].clone()),
        ];
        let oracle = simulate(&OracleProfile::multi_watermark(watermarks, 77)).unwrap();
        let sets_a = build_verification_sets(&specs[0], 10, 3).unwrap();
        for s in &sets_a.trigger {
            assert_eq!(oracle.answer(&render_prompt(s)), "Yes.");
        }
        // Spec B's trigger prompts must hit B's erased parameters, not A's.
        let sets_b = build_verification_sets(&specs[1], 10, 3).unwrap();
        for s in &sets_b.trigger {
            assert_eq!(oracle.answer(&render_prompt(s)), "No.");
        }
    }

    #[test]
    fn quantize_and_prune_leave_profiles_unchanged() {
        let spec = builtin_spec(Builtin::I);
        let profile = OracleProfile::watermarked(spec, 3);
        assert_eq!(apply_attack(&profile, Attack::Quantize).unwrap(), profile);
        assert_eq!(apply_attack(&profile, Attack::Prune).unwrap(), profile);
    }

    #[test]
    fn lora_attack_is_seeded_and_bounded() {
        let specs = mixed_type_specs();
        let watermarks: Vec<EmbeddedWatermark> = specs
            .iter()
            .map(|s| EmbeddedWatermark::exact(s.clone()))
            .collect();
        let profile = OracleProfile::multi_watermark(watermarks, 400);
        let all = apply_attack(&profile, Attack::SecondFineTuneLoRA { erase_prob: 1.0 }).unwrap();
        assert_eq!(degraded_count(&all), 3);
        for wm in &all.watermarks {
            assert!(wm.fidelity_trigger >= WEAKENED_FIDELITY_MIN);
            assert!(wm.leak_reference <= WEAKENED_LEAK_MAX);
        }
        let none = apply_attack(&profile, Attack::SecondFineTuneLoRA { erase_prob: 0.0 }).unwrap();
        assert_eq!(degraded_count(&none), 0);
        assert_eq!(none, profile);

        let a = apply_attack(&profile, Attack::second_finetune_lora()).unwrap();
        let b = apply_attack(&profile, Attack::second_finetune_lora()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn attack_rejects_clean_profiles() {
        let spec = builtin_spec(Builtin::I);
        let profile = OracleProfile::clean_biased(spec, 0.5, 0.5, 1);
        assert!(matches!(
            apply_attack(&profile, Attack::Quantize),
            Err(SimError::UnsupportedMode { .. })
        ));
    }

    #[test]
    fn profile_json_round_trips() {
        let spec = builtin_spec(Builtin::II);
        let profile = OracleProfile::weakened(spec, 0.98, 0.61, 12).with_other_rate(0.05);
        let json = serde_json::to_string_pretty(&profile).unwrap();
        let back: OracleProfile = serde_json::from_str(&json).unwrap();
        assert_eq!(profile, back);
    }
}
