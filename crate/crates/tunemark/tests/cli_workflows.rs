//! End-to-end command-line workflows, run in-process.

use std::fs;
use std::path::Path;

use tunemark::cli::{run_from, EXIT_MIX_VIOLATIONS, EXIT_NOT_VERIFIED, EXIT_VERIFIED};
use tunemark::dataset::{read_jsonl, synthetic_clean_samples, write_jsonl};
use tunemark::sim::OracleProfile;
use tunemark::watermark::{builtin_spec, Builtin};

fn cli(args: &[&str]) -> i32 {
    run_from(std::iter::once("tunemark").chain(args.iter().copied()))
}

fn write_profile(path: &Path, profile: &OracleProfile) {
    fs::write(path, serde_json::to_string_pretty(profile).unwrap()).unwrap();
}

#[test]
fn generate_writes_dataset_manifest_and_index() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let code = cli(&[
        "generate",
        "--spec",
        "I",
        "--trigger",
        "40",
        "--reference",
        "40",
        "--seed",
        "7",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let samples = read_jsonl(&out.join("dataset.jsonl")).unwrap();
    assert_eq!(samples.len(), 80);
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["trigger_count"], 40);
    assert_eq!(manifest["trigger_reference_ratio"], 1.0);
    assert!(out.join("index.json").exists());
}

#[test]
fn generate_then_mix_reports_fraction() {
    let dir = tempfile::tempdir().unwrap();
    let gen_dir = dir.path().join("gen");
    assert_eq!(
        cli(&[
            "generate",
            "--spec",
            "II",
            "--trigger",
            "25",
            "--reference",
            "25",
            "--seed",
            "3",
            "--out",
            gen_dir.to_str().unwrap(),
        ]),
        0
    );
    let clean_path = dir.path().join("clean.jsonl");
    write_jsonl(&clean_path, &synthetic_clean_samples(200, 5)).unwrap();
    let mixed_path = dir.path().join("mixed.jsonl");
    assert_eq!(
        cli(&[
            "mix",
            "--backdoor",
            gen_dir.join("dataset.jsonl").to_str().unwrap(),
            "--clean",
            clean_path.to_str().unwrap(),
            "--seed",
            "3",
            "--out",
            mixed_path.to_str().unwrap(),
        ]),
        0
    );
    let mixed = read_jsonl(&mixed_path).unwrap();
    assert_eq!(mixed.len(), 250);
    let manifest: serde_json::Value = serde_json::from_str(
        &fs::read_to_string(dir.path().join("mixed.jsonl.manifest.json")).unwrap(),
    )
    .unwrap();
    assert!((manifest["backdoor_fraction"].as_f64().unwrap() - 0.2).abs() < 1e-12);
    assert_eq!(manifest["trigger_count"], 25);
}

#[test]
fn verify_exit_codes_follow_the_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let watermarked = dir.path().join("watermarked.json");
    write_profile(
        &watermarked,
        &OracleProfile::watermarked(builtin_spec(Builtin::I), 7),
    );
    let out = dir.path().join("run-verified");
    let code = cli(&[
        "verify",
        "--spec",
        "I",
        "--profile",
        watermarked.to_str().unwrap(),
        "--n",
        "50",
        "--seed",
        "11",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_VERIFIED);
    let verdict: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("verdict.json")).unwrap()).unwrap();
    assert_eq!(verdict["decision"], "verified");
    assert_eq!(verdict["report"]["table"][0][0], 50);
    assert!(out.join("transcript.jsonl").exists());

    let clean = dir.path().join("clean.json");
    write_profile(
        &clean,
        &OracleProfile::clean_biased(builtin_spec(Builtin::I), 0.3, 0.3, 9),
    );
    let out2 = dir.path().join("run-clean");
    let code = cli(&[
        "verify",
        "--spec",
        "I",
        "--profile",
        clean.to_str().unwrap(),
        "--n",
        "50",
        "--seed",
        "11",
        "--out",
        out2.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_NOT_VERIFIED);
}

#[test]
fn verify_needs_exactly_one_oracle_source() {
    let code = cli(&["verify", "--spec", "I", "--out", "/tmp/unused-run"]);
    assert_eq!(code, 3);
}

#[test]
fn config_file_overrides_flags() {
    let dir = tempfile::tempdir().unwrap();
    let profile_path = dir.path().join("wm.json");
    write_profile(
        &profile_path,
        &OracleProfile::watermarked(builtin_spec(Builtin::III), 4),
    );
    let out = dir.path().join("cfg-run");
    let config_path = dir.path().join("config.json");
    fs::write(
        &config_path,
        serde_json::to_string(&serde_json::json!({
            "spec": "III",
            "profile": profile_path,
            "n": 30,
            "seed": 5,
            "out": out,
        }))
        .unwrap(),
    )
    .unwrap();
    // Flag values point elsewhere; the config file must win.
    let code = cli(&[
        "verify",
        "--spec",
        "I",
        "--endpoint",
        "http://127.0.0.1:9/nowhere",
        "--n",
        "2",
        "--config",
        config_path.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_VERIFIED);
    let verdict: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("verdict.json")).unwrap()).unwrap();
    assert_eq!(verdict["watermark_id"], "III");
    assert_eq!(verdict["n"], 30);
}

#[test]
fn stats_replays_flat_tables() {
    // Replaying the weakened-regime average table reproduces the reference
    // p-value under the documented two-sided test.
    let dir = tempfile::tempdir().unwrap();
    let out_file = dir.path().join("stats.json");
    let code = run_capture(&["stats", "--table", "98,2,61,39"], &out_file);
    assert_eq!(code, 0);
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&out_file).unwrap()).unwrap();
    let p: f64 = report["p_value"].as_str().unwrap().parse().unwrap();
    assert!((p - 1.15e-11).abs() / 1.15e-11 < 0.01);
    assert_eq!(report["reject"], true);
}

/// Run the CLI in a subprocess so stdout can be captured as a file.
fn run_capture(args: &[&str], stdout_to: &Path) -> i32 {
    let exe = env!("CARGO_BIN_EXE_tunemark");
    let out = std::process::Command::new(exe)
        .args(args)
        .output()
        .expect("spawn tunemark binary");
    fs::write(stdout_to, &out.stdout).unwrap();
    out.status.code().unwrap_or(-1)
}

#[test]
fn stats_summarizes_run_directories() {
    let dir = tempfile::tempdir().unwrap();
    let profile_path = dir.path().join("wm.json");
    write_profile(
        &profile_path,
        &OracleProfile::watermarked(builtin_spec(Builtin::II), 21),
    );
    // Two verify runs with different seeds land in one directory.
    let runs = dir.path().join("runs");
    fs::create_dir_all(&runs).unwrap();
    for (i, seed) in ["5", "6"].iter().enumerate() {
        let out = dir.path().join(format!("run{i}"));
        assert_eq!(
            cli(&[
                "verify",
                "--spec",
                "II",
                "--profile",
                profile_path.to_str().unwrap(),
                "--n",
                "30",
                "--seed",
                seed,
                "--out",
                out.to_str().unwrap(),
            ]),
            EXIT_VERIFIED
        );
        fs::copy(
            out.join("verdict.json"),
            runs.join(format!("verdict-{i}.json")),
        )
        .unwrap();
    }
    let out_file = dir.path().join("summary.json");
    let code = run_capture(&["stats", "--run-dir", runs.to_str().unwrap()], &out_file);
    assert_eq!(code, 0);
    let value: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&out_file).unwrap()).unwrap();
    assert_eq!(value["summary"]["runs"], 2);
    assert_eq!(value["summary"]["n_t_m"]["mean"], 30.0);
    assert_eq!(value["fishers"].as_array().unwrap().len(), 2);
}

#[test]
fn validate_mix_exit_codes() {
    assert_eq!(cli(&["validate-mix", "I", "II"]), 0);
    assert_eq!(cli(&["validate-mix", "I", "I"]), EXIT_MIX_VIOLATIONS);
    // The first and third builtins share a judge question.
    assert_eq!(
        cli(&["validate-mix", "I", "II", "III"]),
        EXIT_MIX_VIOLATIONS
    );
}

#[test]
fn simulate_transcript_answers_prompt_files() {
    let dir = tempfile::tempdir().unwrap();
    let profile_path = dir.path().join("wm.json");
    write_profile(
        &profile_path,
        &OracleProfile::watermarked(builtin_spec(Builtin::I), 13),
    );
    let spec = builtin_spec(Builtin::I);
    let sets = tunemark::dataset::build_verification_sets(&spec, 5, 2).unwrap();
    let prompts_path = dir.path().join("prompts.jsonl");
    let mut lines = String::new();
    for sample in sets.trigger.iter().chain(&sets.reference) {
        let prompt = tunemark::dataset::render_prompt(sample);
        lines.push_str(&serde_json::to_string(&serde_json::json!({ "prompt": prompt })).unwrap());
        lines.push('\n');
    }
    fs::write(&prompts_path, lines).unwrap();
    let out_path = dir.path().join("transcript.jsonl");
    let code = cli(&[
        "simulate",
        "--profile",
        profile_path.to_str().unwrap(),
        "transcript",
        "--prompts",
        prompts_path.to_str().unwrap(),
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let text = fs::read_to_string(&out_path).unwrap();
    let completions: Vec<String> = text
        .lines()
        .map(|l| {
            serde_json::from_str::<serde_json::Value>(l).unwrap()["completion"]
                .as_str()
                .unwrap()
                .to_string()
        })
        .collect();
    assert_eq!(completions.len(), 10);
    assert!(completions[..5].iter().all(|c| c == "Yes."));
    assert!(completions[5..].iter().all(|c| c == "No."));
}

#[test]
fn spec_files_load_like_builtins() {
    let dir = tempfile::tempdir().unwrap();
    let spec_path = dir.path().join("custom.json");
    let mut spec = builtin_spec(Builtin::II);
    spec.id = "custom-ii".into();
    fs::write(&spec_path, serde_json::to_string_pretty(&spec).unwrap()).unwrap();
    let out = dir.path().join("gen");
    let code = cli(&[
        "generate",
        "--spec",
        spec_path.to_str().unwrap(),
        "--trigger",
        "5",
        "--reference",
        "5",
        "--seed",
        "1",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["spec_ids"][0], "custom-ii");
}
