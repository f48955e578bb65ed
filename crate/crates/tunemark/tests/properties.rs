//! Property tests over the spec invariants.

use proptest::prelude::*;

use tunemark::dataset::{parse_prompt, render_prompt_parts};
use tunemark::stats::{fisher_exact, Sidedness, VerificationTable};
use tunemark::verify::{classify_response, normalize_label};
use tunemark::watermark::{builtin_spec, Builtin, WordChoice};

fn table_strategy() -> impl Strategy<Value = VerificationTable> {
    (0u64..40, 0u64..40, 0u64..40, 0u64..40)
        .prop_map(|(a, b, c, d)| VerificationTable::from_counts(a, b, c, d))
}

proptest! {
    #[test]
    fn fisher_is_invariant_under_joint_row_and_column_swap(table in table_strategy()) {
        let swapped = VerificationTable::from_counts(
            table.n_r_c, table.n_r_m, table.n_t_c, table.n_t_m,
        );
        for sidedness in [Sidedness::TwoSided, Sidedness::OneSidedGreater] {
            let p1 = fisher_exact(&table, sidedness).p_value;
            let p2 = fisher_exact(&swapped, sidedness).p_value;
            prop_assert_eq!(p1, p2);
        }
    }

    #[test]
    fn fisher_p_is_a_probability(table in table_strategy()) {
        for sidedness in [Sidedness::TwoSided, Sidedness::OneSidedGreater] {
            let result = fisher_exact(&table, sidedness);
            prop_assert!(result.p_value > 0.0);
            prop_assert!(result.p_value <= 1.0);
            // Two-sided tail can never be smaller than the upper tail alone
            // minus rounding; both contain the observed table.
            prop_assert_eq!(result.reject, result.p_value < result.alpha);
        }
    }

    #[test]
    fn prompt_render_parse_round_trips(
        instruction in "[ -~]{1,80}",
        input in proptest::option::of("[ -~]{0,80}"),
    ) {
        // Content containing the literal template separators is out of the
        // grammar by construction.
        prop_assume!(!instruction.contains("### Input:"));
        prop_assume!(input.as_deref().is_none_or(|i| !i.contains("### Input:")));
        prop_assume!(!instruction.contains("### Response:"));
        prop_assume!(input.as_deref().is_none_or(|i| !i.contains("### Response:")));
        let rendered = render_prompt_parts(&instruction, input.as_deref());
        let (back_instruction, back_input) = parse_prompt(&rendered).unwrap();
        prop_assert_eq!(back_instruction, instruction);
        prop_assert_eq!(back_input, input);
    }

    #[test]
    fn render_is_injective_outside_the_separator_alphabet(
        a in "[a-zA-Z0-9 ,.?]{1,60}",
        b in "[a-zA-Z0-9 ,.?]{1,60}",
        input in "[a-zA-Z0-9 ,.?]{0,60}",
    ) {
        let ra = render_prompt_parts(&a, Some(&input));
        let rb = render_prompt_parts(&b, Some(&input));
        prop_assert_eq!(ra == rb, a == b);
        // Cross-template renders never collide.
        let no_input = render_prompt_parts(&a, None);
        prop_assert_ne!(&no_input, &ra);
    }

    #[test]
    fn classification_ignores_case_and_punctuation(
        padding in "[.!?,\"' ]{0,6}",
        tail in "[ -~]{0,30}",
        yes in proptest::bool::ANY,
    ) {
        let word = if yes { "Yes" } else { "No" };
        let text = format!("{padding}{word}{}{tail}", if tail.is_empty() { "" } else { ". " });
        let class = classify_response(&text, "Yes.", "No.");
        let expected = if yes {
            tunemark::stats::ResponseClass::Manipulated
        } else {
            tunemark::stats::ResponseClass::Correct
        };
        prop_assert_eq!(class, expected);
    }

    #[test]
    fn normalized_labels_drop_everything_after_the_first_word(
        text in "[a-zA-Z]{1,12}",
        junk in "[ .,!?;:'\"-]{1,4}",
        rest in "[ -~]{0,20}",
    ) {
        let combined = format!("{text}{junk}{rest}");
        prop_assert_eq!(normalize_label(&combined), text.to_lowercase());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reference_words_never_collide_with_triggers(seed in any::<u64>()) {
        for name in Builtin::ALL {
            let spec = builtin_spec(name);
            let words = spec.reference_words().unwrap();
            let mut rng = tunemark::seeding::derive_rng(seed, "prop-reference");
            for _ in 0..32 {
                if let WordChoice::Word(w) = words.sample(&mut rng) {
                    prop_assert_ne!(&w, &spec.trigger_word);
                    prop_assert!(spec.word_set.contains(&w));
                }
            }
        }
    }

    #[test]
    fn built_sets_respect_the_sample_invariants(seed in any::<u64>(), n in 1usize..24) {
        for name in [Builtin::I, Builtin::II, Builtin::III, Builtin::IV] {
            let spec = builtin_spec(name);
            let triggers = tunemark::dataset::build_trigger_set(&spec, n, seed).unwrap();
            for sample in &triggers {
                prop_assert!(tunemark::dataset::trigger_condition(&spec, sample));
                prop_assert_eq!(&sample.output, &spec.output_manipulated);
            }
            let references = tunemark::dataset::build_reference_set(&spec, n, seed).unwrap();
            for sample in &references {
                prop_assert!(!tunemark::dataset::trigger_condition(&spec, sample));
                prop_assert_eq!(&sample.output, &spec.output_correct);
            }
        }
    }
}
