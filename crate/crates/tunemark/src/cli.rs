//! Command-line surface.
//!
//! Subcommands bind the library into reproducible batch workflows: generate
//! backdoor datasets, mix them into clean corpora, verify watermarks against
//! a live endpoint or a simulated profile, serve/replay simulator profiles,
//! replay contingency tables, and validate multi-watermark mixes. All
//! randomness flows through `--seed`; reruns with identical flags produce
//! byte-identical files.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::dataset::{
    build_backdoor_dataset, build_verification_sets, mix_with_clean, read_jsonl, write_jsonl,
    DatasetManifest,
};
use crate::error::PipelineError;
use crate::http::{serve_oracle, HttpOracle, HttpOracleConfig};
use crate::sim::{simulate, OracleProfile};
use crate::stats::{
    fisher_exact_at, summarize_runs, FisherReport, Sidedness, VerificationTable, DEFAULT_ALPHA,
};
use crate::verify::{
    run_verification_with, Decision, InferenceOracle, PipelineConfig, TranscriptEntry, Verdict,
};
use crate::watermark::{builtin_spec, validate_mix, Builtin, MixViolation, WatermarkSpec};

pub const EXIT_VERIFIED: i32 = 0;
pub const EXIT_NOT_VERIFIED: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_ERROR: i32 = 3;
pub const EXIT_MIX_VIOLATIONS: i32 = 4;

const BEARER_ENV: &str = "TUNEMARK_BEARER_TOKEN";

#[derive(Debug, Parser)]
#[command(
    name = "tunemark",
    version,
    about = "Backdoor watermark datasets and black-box ownership verification for fine-tuned text models"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a backdoor dataset (and optional verification sets) from a spec.
    Generate(GenerateArgs),
    /// Mix a backdoor JSONL file into a clean instruction-tuning JSONL file.
    Mix(MixArgs),
    /// Verify a watermark against an HTTP endpoint or a simulator profile.
    Verify(VerifyArgs),
    /// Serve a simulator profile over HTTP, or replay prompts through it.
    Simulate(SimulateArgs),
    /// Run the exact test on a table or summarize a run directory.
    Stats(StatsArgs),
    /// Check the pairwise design rules for mixing several watermarks.
    ValidateMix(ValidateMixArgs),
}

#[derive(Debug, Args)]
struct GenerateArgs {
    /// Builtin spec name (I..VI) or path to a spec JSON file.
    #[arg(long)]
    spec: String,
    /// Trigger samples to build.
    #[arg(long, default_value_t = 400)]
    trigger: usize,
    /// Reference samples to build.
    #[arg(long, default_value_t = 400)]
    reference: usize,
    /// Verification prompts per side (0 skips verification files).
    #[arg(long, default_value_t = 0)]
    verification: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Override the spec's subject corpus with a sentence file.
    #[arg(long)]
    corpus: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct MixArgs {
    /// Backdoor dataset JSONL (as produced by generate).
    #[arg(long)]
    backdoor: PathBuf,
    /// Clean instruction-tuning JSONL.
    #[arg(long)]
    clean: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output JSONL path; the manifest lands next to it.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Builtin spec name (I..VI) or path to a spec JSON file.
    #[arg(long)]
    spec: String,
    /// Oracle endpoint URL (POST {"prompt"} -> {"completion"}).
    #[arg(long, conflicts_with = "profile")]
    endpoint: Option<String>,
    /// Simulator profile JSON file standing in for a live model.
    #[arg(long)]
    profile: Option<PathBuf>,
    /// Prompts per side.
    #[arg(long, default_value_t = 100)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    alpha: f64,
    #[arg(long, default_value = "two-sided")]
    sidedness: Sidedness,
    /// Max in-flight oracle queries.
    #[arg(long, default_value_t = 8)]
    concurrency: usize,
    /// Per-request timeout for HTTP oracles, seconds.
    #[arg(long, default_value_t = 30)]
    timeout_secs: u64,
    /// Override the spec's subject corpus with a sentence file.
    #[arg(long)]
    corpus: Option<PathBuf>,
    /// Report directory.
    #[arg(long, default_value = "verify-run")]
    out: PathBuf,
    /// JSON config file; its values override the flags above.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    /// Simulator profile JSON file.
    #[arg(long)]
    profile: PathBuf,
    #[command(subcommand)]
    action: SimulateAction,
}

#[derive(Debug, Subcommand)]
enum SimulateAction {
    /// Serve the profile over HTTP until interrupted.
    Serve {
        #[arg(long, default_value = "127.0.0.1:7701")]
        addr: String,
        #[arg(long, default_value_t = 4)]
        workers: usize,
    },
    /// Answer a JSONL file of {"prompt": ...} records into a transcript file.
    Transcript {
        #[arg(long)]
        prompts: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Args)]
struct StatsArgs {
    /// Flat table, row-major: n_t_m,n_t_c,n_r_m,n_r_c.
    #[arg(long, conflicts_with = "run_dir")]
    table: Option<String>,
    /// Directory of verdict JSON reports to replay and summarize.
    #[arg(long)]
    run_dir: Option<PathBuf>,
    #[arg(long, default_value = "two-sided")]
    sidedness: Sidedness,
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    alpha: f64,
}

#[derive(Debug, Args)]
struct ValidateMixArgs {
    /// Builtin names or spec JSON paths.
    #[arg(required = true)]
    specs: Vec<String>,
}

/// Resolved verify-run configuration after merging flags, config file and
/// environment. Exactly one oracle source is present.
#[derive(Debug)]
pub struct RunConfig {
    pub spec: WatermarkSpec,
    pub endpoint: Option<HttpOracleConfig>,
    pub profile: Option<OracleProfile>,
    pub n: usize,
    pub seed: u64,
    pub alpha: f64,
    pub sidedness: Sidedness,
    pub concurrency: usize,
    pub out: PathBuf,
}

/// Values a verify config file may override.
#[derive(Debug, Default, Deserialize)]
struct VerifyFileConfig {
    spec: Option<String>,
    endpoint: Option<HttpOracleConfig>,
    profile: Option<PathBuf>,
    n: Option<usize>,
    seed: Option<u64>,
    alpha: Option<f64>,
    sidedness: Option<Sidedness>,
    concurrency: Option<usize>,
    out: Option<PathBuf>,
}

/// Entry point used by the binary.
pub fn main_entry() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Render clap's help/usage output but keep exit codes 0..2 free
            // for verdict semantics.
            let failed = e.use_stderr();
            let _ = e.print();
            return if failed { EXIT_ERROR } else { 0 };
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_ERROR
        }
    }
}

/// Parse and run from explicit arguments (tests use this).
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => match dispatch(cli) {
            Ok(code) => code,
            Err(e) => {
                eprintln!("error: {e:#}");
                EXIT_ERROR
            }
        },
        Err(e) => {
            let _ = e.print();
            EXIT_ERROR
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Generate(args) => cmd_generate(args),
        Command::Mix(args) => cmd_mix(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Stats(args) => cmd_stats(args),
        Command::ValidateMix(args) => cmd_validate_mix(args),
    }
}

fn load_spec(arg: &str, corpus: Option<&Path>) -> Result<WatermarkSpec> {
    let mut spec = if let Ok(builtin) = arg.parse::<Builtin>() {
        builtin_spec(builtin)
    } else {
        let text = fs::read_to_string(arg).with_context(|| format!("reading spec {arg}"))?;
        serde_json::from_str(&text).with_context(|| format!("parsing spec {arg}"))?
    };
    if let Some(path) = corpus {
        use crate::watermark::SubjectSource;
        spec.subject_source = match spec.subject_source {
            SubjectSource::PairedSentence { .. } => SubjectSource::PairedSentence {
                path: Some(path.to_path_buf()),
            },
            _ => SubjectSource::Corpus {
                path: Some(path.to_path_buf()),
            },
        };
    }
    spec.validate()?;
    Ok(spec)
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    let text = serde_json::to_string_pretty(value).context("serializing report")?;
    fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

/// Index of the artifacts a command produced, for regression fixtures.
#[derive(Debug, Serialize, Deserialize)]
struct RunIndex {
    command: String,
    seed: u64,
    files: BTreeMap<String, String>,
}

fn cmd_generate(args: GenerateArgs) -> Result<i32> {
    let spec = load_spec(&args.spec, args.corpus.as_deref())?;
    fs::create_dir_all(&args.out).with_context(|| format!("creating {}", args.out.display()))?;
    let (samples, mut manifest) =
        build_backdoor_dataset(&spec, args.trigger, args.reference, args.seed)?;
    let dataset_path = args.out.join("dataset.jsonl");
    write_jsonl(&dataset_path, &samples)?;

    let mut files = BTreeMap::new();
    files.insert("dataset".to_string(), "dataset.jsonl".to_string());
    files.insert("manifest".to_string(), "manifest.json".to_string());

    if args.verification > 0 {
        let sets = build_verification_sets(&spec, args.verification, args.seed)?;
        if sets.subject_overlap_possible {
            manifest.warnings.push(
                "verification subjects may overlap training subjects (pool too small)".to_string(),
            );
        }
        let t_path = args.out.join("verification_trigger.jsonl");
        let r_path = args.out.join("verification_reference.jsonl");
        write_jsonl(&t_path, &sets.trigger)?;
        write_jsonl(&r_path, &sets.reference)?;
        files.insert(
            "verification_trigger".to_string(),
            "verification_trigger.jsonl".to_string(),
        );
        files.insert(
            "verification_reference".to_string(),
            "verification_reference.jsonl".to_string(),
        );
    }
    write_json(&args.out.join("manifest.json"), &manifest)?;
    let index = RunIndex {
        command: "generate".to_string(),
        seed: args.seed,
        files,
    };
    write_json(&args.out.join("index.json"), &index)?;
    println!(
        "wrote {} samples ({} trigger / {} reference) to {}",
        samples.len(),
        manifest.trigger_count,
        manifest.reference_count,
        dataset_path.display()
    );
    for warning in &manifest.warnings {
        eprintln!("warning: {warning}");
    }
    Ok(0)
}

fn cmd_mix(args: MixArgs) -> Result<i32> {
    let backdoor = read_jsonl(&args.backdoor)?;
    let mut manifest = mix_with_clean(&backdoor, &args.clean, args.seed, &args.out)?;
    // Roles are not stored in training files; recover counts from the
    // generate-step manifest when it sits next to the backdoor file.
    if let Some(source) = sidecar_manifest(&args.backdoor) {
        manifest.trigger_count = source.trigger_count;
        manifest.reference_count = source.reference_count;
        manifest.clean_count = manifest
            .clean_count
            .saturating_sub(source.trigger_count + source.reference_count);
        manifest.spec_ids = source.spec_ids;
        manifest.trigger_reference_ratio = source.trigger_reference_ratio;
    } else {
        manifest
            .warnings
            .push("backdoor roles unknown (no sidecar manifest found)".to_string());
    }
    let manifest_path = manifest_path_for(&args.out);
    write_json(&manifest_path, &manifest)?;
    println!(
        "mixed {} backdoor + {} clean records into {} (backdoor fraction {:.4})",
        backdoor.len(),
        manifest.clean_count,
        args.out.display(),
        manifest.backdoor_fraction.unwrap_or(0.0)
    );
    Ok(0)
}

fn sidecar_manifest(backdoor: &Path) -> Option<DatasetManifest> {
    let dir_manifest = backdoor.parent().map(|d| d.join("manifest.json"));
    let stem_manifest = Some(manifest_path_for(backdoor));
    for candidate in [stem_manifest, dir_manifest].into_iter().flatten() {
        if let Ok(text) = fs::read_to_string(&candidate) {
            if let Ok(manifest) = serde_json::from_str::<DatasetManifest>(&text) {
                return Some(manifest);
            }
        }
    }
    None
}

fn manifest_path_for(dataset: &Path) -> PathBuf {
    let mut name = dataset.file_name().map_or_else(
        || "dataset".to_string(),
        |n| n.to_string_lossy().to_string(),
    );
    name.push_str(".manifest.json");
    dataset.with_file_name(name)
}

fn resolve_run_config(args: VerifyArgs) -> Result<RunConfig> {
    let mut spec_arg = args.spec;
    let mut endpoint = args.endpoint.map(HttpOracleConfig::new);
    if let Some(ep) = endpoint.as_mut() {
        ep.timeout_secs = args.timeout_secs;
    }
    let mut profile_path = args.profile;
    let mut n = args.n;
    let mut seed = args.seed;
    let mut alpha = args.alpha;
    let mut sidedness = args.sidedness;
    let mut concurrency = args.concurrency;
    let mut out = args.out;

    if let Some(config_path) = &args.config {
        let text = fs::read_to_string(config_path)
            .with_context(|| format!("reading config {}", config_path.display()))?;
        let file: VerifyFileConfig = serde_json::from_str(&text)
            .with_context(|| format!("parsing config {}", config_path.display()))?;
        // Config file wins over flags.
        if let Some(v) = file.spec {
            spec_arg = v;
        }
        if let Some(v) = file.endpoint {
            endpoint = Some(v);
            profile_path = None;
        }
        if let Some(v) = file.profile {
            profile_path = Some(v);
            endpoint = None;
        }
        if let Some(v) = file.n {
            n = v;
        }
        if let Some(v) = file.seed {
            seed = v;
        }
        if let Some(v) = file.alpha {
            alpha = v;
        }
        if let Some(v) = file.sidedness {
            sidedness = v;
        }
        if let Some(v) = file.concurrency {
            concurrency = v;
        }
        if let Some(v) = file.out {
            out = v;
        }
    }

    let spec = load_spec(&spec_arg, args.corpus.as_deref())?;
    let profile = match &profile_path {
        Some(path) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading profile {}", path.display()))?;
            let profile: OracleProfile = serde_json::from_str(&text)
                .with_context(|| format!("parsing profile {}", path.display()))?;
            Some(profile)
        }
        None => None,
    };
    if let Some(ep) = endpoint.as_mut() {
        if ep.bearer_token.is_none() {
            ep.bearer_token = std::env::var(BEARER_ENV).ok();
        }
    }
    match (&endpoint, &profile) {
        (Some(_), None) | (None, Some(_)) => {}
        (None, None) => bail!("verify needs exactly one oracle source: --endpoint or --profile"),
        (Some(_), Some(_)) => bail!("verify takes --endpoint or --profile, not both"),
    }
    Ok(RunConfig {
        spec,
        endpoint,
        profile,
        n,
        seed,
        alpha,
        sidedness,
        concurrency,
        out,
    })
}

/// Full verdict report written to the run directory.
#[derive(Debug, Serialize, Deserialize)]
pub struct VerdictReport {
    pub watermark_id: String,
    pub decision: Decision,
    pub separation: f64,
    pub n: usize,
    pub seed: u64,
    pub subject_overlap_possible: bool,
    pub report: FisherReport,
}

impl VerdictReport {
    pub fn new(verdict: &Verdict, n: usize, seed: u64) -> Self {
        Self {
            watermark_id: verdict.watermark_id.clone(),
            decision: verdict.decision,
            separation: verdict.separation,
            n,
            seed,
            subject_overlap_possible: verdict.subject_overlap_possible,
            report: FisherReport::new(&verdict.table, &verdict.fisher),
        }
    }
}

fn cmd_verify(args: VerifyArgs) -> Result<i32> {
    let config = resolve_run_config(args)?;
    let oracle: Box<dyn InferenceOracle> = match (&config.endpoint, &config.profile) {
        (Some(ep), None) => Box::new(HttpOracle::new(ep.clone())),
        (None, Some(profile)) => Box::new(simulate(profile)?),
        _ => unreachable!("resolve_run_config enforces exactly one source"),
    };
    let pipeline = PipelineConfig {
        concurrency: config.concurrency,
        sidedness: config.sidedness,
        ..PipelineConfig::default()
    };
    fs::create_dir_all(&config.out)
        .with_context(|| format!("creating {}", config.out.display()))?;
    let outcome = run_verification_with(
        &config.spec,
        oracle.as_ref(),
        config.n,
        config.seed,
        config.alpha,
        &pipeline,
    );
    let (verdict, transcript) = match outcome {
        Ok(result) => result,
        Err(PipelineError::OracleFailure {
            source,
            partial,
            completed,
            total,
        }) => {
            let report = FisherReport::new(
                &partial,
                &fisher_exact_at(&partial, config.sidedness, config.alpha),
            );
            write_json(&config.out.join("partial.json"), &report)?;
            eprintln!(
                "oracle failed after {completed}/{total} queries: {source}; partial table written"
            );
            return Ok(EXIT_ERROR);
        }
        Err(e) => return Err(e.into()),
    };

    write_transcript(&config.out.join("transcript.jsonl"), &transcript)?;
    let report = VerdictReport::new(&verdict, config.n, config.seed);
    write_json(&config.out.join("verdict.json"), &report)?;
    let index = RunIndex {
        command: "verify".to_string(),
        seed: config.seed,
        files: BTreeMap::from([
            ("verdict".to_string(), "verdict.json".to_string()),
            ("transcript".to_string(), "transcript.jsonl".to_string()),
        ]),
    };
    write_json(&config.out.join("index.json"), &index)?;
    println!(
        "{}: p = {} ({}), decision = {:?}",
        verdict.watermark_id, report.report.p_value, report.report.sidedness, verdict.decision
    );
    Ok(match verdict.decision {
        Decision::Verified => EXIT_VERIFIED,
        Decision::NotVerified => EXIT_NOT_VERIFIED,
        Decision::Inconclusive => EXIT_INCONCLUSIVE,
    })
}

fn write_transcript(path: &Path, transcript: &[TranscriptEntry]) -> Result<()> {
    use std::io::Write;
    let file = fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
    let mut writer = std::io::BufWriter::new(file);
    for entry in transcript {
        let line = serde_json::to_string(entry).context("serializing transcript entry")?;
        writeln!(writer, "{line}")?;
    }
    Ok(())
}

fn cmd_simulate(args: SimulateArgs) -> Result<i32> {
    let text = fs::read_to_string(&args.profile)
        .with_context(|| format!("reading profile {}", args.profile.display()))?;
    let profile: OracleProfile = serde_json::from_str(&text)
        .with_context(|| format!("parsing profile {}", args.profile.display()))?;
    let oracle = simulate(&profile)?;
    match args.action {
        SimulateAction::Serve { addr, workers } => {
            let server = serve_oracle(Arc::new(oracle), &addr, workers)
                .map_err(|e| anyhow!(e.to_string()))?;
            println!("serving oracle on http://{}", server.local_addr());
            server.wait();
            Ok(0)
        }
        SimulateAction::Transcript { prompts, out } => {
            #[derive(Deserialize)]
            struct PromptRecord {
                prompt: String,
            }
            #[derive(Serialize)]
            struct TranscriptRecord {
                prompt: String,
                completion: String,
            }
            use std::io::Write;
            let text = fs::read_to_string(&prompts)
                .with_context(|| format!("reading prompts {}", prompts.display()))?;
            let file =
                fs::File::create(&out).with_context(|| format!("creating {}", out.display()))?;
            let mut writer = std::io::BufWriter::new(file);
            let mut count = 0usize;
            for (idx, line) in text.lines().enumerate() {
                if line.trim().is_empty() {
                    continue;
                }
                let record: PromptRecord = serde_json::from_str(line)
                    .with_context(|| format!("prompt record at line {}", idx + 1))?;
                let completion = oracle
                    .complete(&record.prompt)
                    .map_err(|e| anyhow!(e.to_string()))?;
                let out_record = TranscriptRecord {
                    prompt: record.prompt,
                    completion,
                };
                writeln!(writer, "{}", serde_json::to_string(&out_record)?)?;
                count += 1;
            }
            println!("answered {count} prompts into {}", out.display());
            Ok(0)
        }
    }
}

fn cmd_stats(args: StatsArgs) -> Result<i32> {
    if let Some(table_arg) = &args.table {
        let cells: Vec<u64> = table_arg
            .split(',')
            .map(|cell| cell.trim().parse::<u64>())
            .collect::<Result<_, _>>()
            .context("table must be four comma-separated counts")?;
        if cells.len() != 4 {
            bail!("table must have exactly four cells: n_t_m,n_t_c,n_r_m,n_r_c");
        }
        let table = VerificationTable::from_counts(cells[0], cells[1], cells[2], cells[3]);
        let fisher = fisher_exact_at(&table, args.sidedness, args.alpha);
        let report = FisherReport::new(&table, &fisher);
        println!("{}", serde_json::to_string_pretty(&report)?);
        return Ok(0);
    }
    let Some(run_dir) = &args.run_dir else {
        bail!("stats needs --table or --run-dir");
    };
    let mut reports: Vec<VerdictReport> = Vec::new();
    let mut entries: Vec<PathBuf> = fs::read_dir(run_dir)
        .with_context(|| format!("reading {}", run_dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            p.file_name()
                .and_then(|n| n.to_str())
                .is_some_and(|n| n.starts_with("verdict") && n.ends_with(".json"))
        })
        .collect();
    entries.sort();
    for path in &entries {
        let text = fs::read_to_string(path)?;
        reports.push(serde_json::from_str(&text)?);
    }
    if reports.is_empty() {
        bail!("no verdict*.json reports found in {}", run_dir.display());
    }
    let tables: Vec<VerificationTable> = reports
        .iter()
        .map(|r| {
            let mut t = VerificationTable::from_counts(
                r.report.table[0][0],
                r.report.table[0][1],
                r.report.table[1][0],
                r.report.table[1][1],
            );
            t.excluded_t = r.report.excluded[0];
            t.excluded_r = r.report.excluded[1];
            t
        })
        .collect();
    let fishers: Vec<FisherReport> = tables
        .iter()
        .map(|t| FisherReport::new(t, &fisher_exact_at(t, args.sidedness, args.alpha)))
        .collect();
    if tables.len() == 1 {
        println!("{}", serde_json::to_string_pretty(&fishers[0])?);
    } else {
        let summary = summarize_runs(&tables)?;
        println!(
            "{}",
            serde_json::to_string_pretty(&serde_json::json!({
                "summary": summary,
                "fishers": fishers,
            }))?
        );
    }
    Ok(0)
}

fn cmd_validate_mix(args: ValidateMixArgs) -> Result<i32> {
    let specs: Vec<WatermarkSpec> = args
        .specs
        .iter()
        .map(|arg| load_spec(arg, None))
        .collect::<Result<_>>()?;
    let violations: Vec<MixViolation> = validate_mix(&specs);
    println!("{}", serde_json::to_string_pretty(&violations)?);
    if violations.is_empty() {
        Ok(0)
    } else {
        for v in &violations {
            eprintln!("violation: {v}");
        }
        Ok(EXIT_MIX_VIOLATIONS)
    }
}
