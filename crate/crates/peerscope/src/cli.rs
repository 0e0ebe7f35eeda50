//! Command implementations behind the `peerscope` binary: corpus
//! generation, scoring, baselines, experiments, and model training. Every
//! command is deterministic given its flags and seeds, and records its
//! configuration plus input digests in a run manifest.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Subcommand};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::corpus::{
    generate_synthetic, load_corpus, save_corpus, synthetic_api_map, synthetic_catalog, Corpus,
    SuspensionBias, SyntheticSpec,
};
use crate::error::{Error, Result};
use crate::experiments::{
    group_size_sweep, privilege_mode_comparison, suspended_correlation, threshold_sweep,
    write_bubble_csv, write_sweep_csv, SampleSpec, SizeBucket, SweepResult,
};
use crate::peergroup::{groups_by_category, groups_by_related, GroupingRun, Strategy};
use crate::privilege::{ApiPermissionMap, PermissionCatalog, PrivilegeKind};
use crate::ratio::Ratio;
use crate::scoring::{
    baseline_privileges, compute_frequencies, rank, score_corpus, write_baselines_json,
    write_reports_csv, write_reports_jsonl, Aggregation, ScoringConfig,
};
use crate::textmodels::{
    groups_by_lda, groups_by_naive_bayes, labeled_descriptions, lda_top_words, lda_train, nb_train,
    tokenized_descriptions, LdaModel, NaiveBayesModel, TokenPipelineConfig,
};

/// Inputs shared by the scoring-pipeline commands.
#[derive(Debug, Clone, Args)]
pub struct PipelineArgs {
    /// JSONL corpus snapshot.
    pub corpus: PathBuf,

    /// Permission catalog JSON; the built-in browser catalog when omitted.
    #[arg(long)]
    pub catalog: Option<PathBuf>,

    /// API-call to permission mapping JSON (required for the estimated and
    /// intersection modes).
    #[arg(long = "api-map")]
    pub api_map: Option<PathBuf>,

    /// Peer grouping strategy: category, related, naive_bayes or lda.
    #[arg(long, default_value = "category")]
    pub strategy: String,

    /// Privilege estimate: requested, estimated, intersection or
    /// api_calls_raw.
    #[arg(long, default_value = "requested")]
    pub mode: String,

    /// Relative frequency threshold, as a fraction ("1/10") or decimal
    /// ("0.05").
    #[arg(long, default_value = "1/10")]
    pub threshold: String,

    /// Groups smaller than this are flagged low-confidence.
    #[arg(long, default_value_t = 5)]
    pub min_group_size: usize,

    /// Upper edge of the yellow color band.
    #[arg(long, default_value_t = 2.0)]
    pub yellow_max: f64,

    /// Multi-group score aggregation for overlapping strategies: max or sum.
    #[arg(long, default_value = "max")]
    pub aggregation: String,

    /// Allow the LDA strategy in scoring runs (off by default: topics do
    /// not always map to functionality).
    #[arg(long)]
    pub enable_lda: bool,

    /// Reuse a model dump from `train` instead of training in-place
    /// (naive_bayes and lda strategies).
    #[arg(long)]
    pub model: Option<PathBuf>,

    /// Topic count when training LDA in-place.
    #[arg(long, default_value_t = 8)]
    pub lda_topics: usize,

    /// Dirichlet document prior; 50/K when omitted.
    #[arg(long)]
    pub lda_alpha: Option<f64>,

    /// Dirichlet topic prior.
    #[arg(long, default_value_t = 0.01)]
    pub lda_beta: f64,

    /// Gibbs sweeps when training LDA in-place.
    #[arg(long, default_value_t = 1000)]
    pub lda_iterations: usize,

    /// Topic probability above which an app joins a topic group.
    #[arg(long, default_value_t = 0.25)]
    pub assignment_threshold: f64,

    /// Stopword list, one word per line; built-in list when omitted.
    #[arg(long)]
    pub stopwords: Option<PathBuf>,

    /// Dictionary file, one word per line; no dictionary filter when
    /// omitted.
    #[arg(long)]
    pub dictionary: Option<PathBuf>,

    /// Seed for in-place model training.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Cap on worker threads; all cores when omitted.
    #[arg(long)]
    pub jobs: Option<usize>,

    /// Output directory, created if missing.
    #[arg(long, default_value = "out")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct ScoreArgs {
    #[command(flatten)]
    pub pipeline: PipelineArgs,

    /// Report formats to write: csv, jsonl or both.
    #[arg(long, default_value = "both")]
    pub format: String,

    /// Embed each group's baseline privileges in the JSONL reports.
    #[arg(long)]
    pub include_baseline: bool,
}

#[derive(Debug, Clone, Args)]
pub struct GenerateArgs {
    /// Number of applications.
    #[arg(long, default_value_t = 1000)]
    pub apps: usize,

    /// Number of peer groups.
    #[arg(long, default_value_t = 10)]
    pub groups: usize,

    #[arg(long, default_value_t = 40)]
    pub vocab_per_group: usize,

    #[arg(long, default_value_t = 8)]
    pub perms_per_group: usize,

    /// Fraction of apps planted as over-privileged outliers.
    #[arg(long, default_value_t = 0.0)]
    pub outlier_fraction: f64,

    /// Foreign permissions planted on each outlier.
    #[arg(long, default_value_t = 3)]
    pub spurious_per_outlier: usize,

    /// Suspension bias as `count:prob` steps, e.g. "0:0.02,1:0.3,3:0.9".
    #[arg(long)]
    pub bias: Option<String>,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    #[arg(long, default_value = "out")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct TrainArgs {
    /// Model family: nb or lda.
    pub model: String,

    /// JSONL corpus snapshot.
    pub corpus: PathBuf,

    #[arg(long)]
    pub catalog: Option<PathBuf>,

    /// Where to write the model dump.
    #[arg(long, default_value = "model.json")]
    pub out: PathBuf,

    /// Training fraction for nb; 1.0 trains on everything and skips the
    /// accuracy report.
    #[arg(long, default_value_t = 0.6)]
    pub split: f64,

    /// Topic count for lda.
    #[arg(long, default_value_t = 8)]
    pub topics: usize,

    #[arg(long)]
    pub alpha: Option<f64>,

    #[arg(long, default_value_t = 0.01)]
    pub beta: f64,

    #[arg(long, default_value_t = 1000)]
    pub iterations: usize,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    #[arg(long)]
    pub stopwords: Option<PathBuf>,

    #[arg(long)]
    pub dictionary: Option<PathBuf>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum ExperimentCmd {
    /// Flagged-fraction sweep across relative-frequency thresholds.
    Threshold {
        #[command(flatten)]
        pipeline: PipelineArgs,
        /// Comma-separated thresholds, e.g. "0.01,0.05,0.10,0.20".
        #[arg(long, value_delimiter = ',')]
        thresholds: Vec<String>,
    },
    /// Clean-fraction per group-size bucket.
    Groupsize {
        #[command(flatten)]
        pipeline: PipelineArgs,
        /// Comma-separated buckets, e.g. "1-4,5-9,10-14,15+".
        #[arg(long, value_delimiter = ',', default_value = "1-4,5-9,10-14,15+")]
        buckets: Vec<String>,
    },
    /// Clean-fraction per privilege-estimation mode.
    Privmode {
        #[command(flatten)]
        pipeline: PipelineArgs,
        /// Comma-separated modes.
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "requested,estimated,intersection"
        )]
        modes: Vec<String>,
    },
    /// Suspended share per score on a balanced live/suspended sample.
    Suspended {
        #[command(flatten)]
        pipeline: PipelineArgs,
        #[arg(long, default_value_t = 500)]
        live: usize,
        #[arg(long, default_value_t = 500)]
        suspended: usize,
        #[arg(long, default_value_t = 0)]
        sample_seed: u64,
    },
}

impl ExperimentCmd {
    fn pipeline(&self) -> &PipelineArgs {
        match self {
            ExperimentCmd::Threshold { pipeline, .. }
            | ExperimentCmd::Groupsize { pipeline, .. }
            | ExperimentCmd::Privmode { pipeline, .. }
            | ExperimentCmd::Suspended { pipeline, .. } => pipeline,
        }
    }
}

/// The resolved configuration of one pipeline run, as recorded in the
/// manifest.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub corpus: PathBuf,
    pub catalog: Option<PathBuf>,
    pub api_map: Option<PathBuf>,
    pub strategy: Strategy,
    pub mode: PrivilegeKind,
    pub threshold: Ratio,
    pub min_group_size: usize,
    pub yellow_max: f64,
    pub aggregation: Aggregation,
    pub lda_topics: usize,
    pub lda_alpha: Option<f64>,
    pub lda_beta: f64,
    pub lda_iterations: usize,
    pub assignment_threshold: f64,
    pub seed: u64,
    pub jobs: Option<usize>,
    pub out_dir: PathBuf,
}

impl RunConfig {
    /// Parses and validates the flag strings; missing files are
    /// configuration errors naming the path.
    pub fn resolve(args: &PipelineArgs) -> Result<Self> {
        let strategy: Strategy = args.strategy.parse()?;
        let mode: PrivilegeKind = args.mode.parse()?;
        let threshold: Ratio = args.threshold.parse()?;
        if !threshold.in_unit_interval() {
            return Err(Error::Config(format!(
                "threshold {threshold} outside (0, 1]"
            )));
        }
        let aggregation: Aggregation = args.aggregation.parse()?;

        require_file(&args.corpus)?;
        for path in [
            &args.catalog,
            &args.api_map,
            &args.model,
            &args.stopwords,
            &args.dictionary,
        ]
        .into_iter()
        .flatten()
        {
            require_file(path)?;
        }
        if strategy == Strategy::Lda && !args.enable_lda {
            return Err(Error::Config(
                "the lda strategy is excluded from scoring by default; pass --enable-lda to use it"
                    .into(),
            ));
        }

        Ok(RunConfig {
            corpus: args.corpus.clone(),
            catalog: args.catalog.clone(),
            api_map: args.api_map.clone(),
            strategy,
            mode,
            threshold,
            min_group_size: args.min_group_size,
            yellow_max: args.yellow_max,
            aggregation,
            lda_topics: args.lda_topics,
            lda_alpha: args.lda_alpha,
            lda_beta: args.lda_beta,
            lda_iterations: args.lda_iterations,
            assignment_threshold: args.assignment_threshold,
            seed: args.seed,
            jobs: args.jobs,
            out_dir: args.out_dir.clone(),
        })
    }
}

fn require_file(path: &Path) -> Result<()> {
    if !path.is_file() {
        return Err(Error::Config(format!("no such file: {}", path.display())));
    }
    Ok(())
}

/// Runs `f` inside a rayon pool capped at `jobs` threads, or on the global
/// pool when no cap is given.
fn with_jobs<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> Result<T> + Send) -> Result<T> {
    match jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Config(format!("cannot build a {n}-thread pool: {e}")))?
            .install(f),
        None => f(),
    }
}

/// Everything loaded from disk for one pipeline run.
struct LoadedInputs {
    corpus: Corpus,
    catalog: PermissionCatalog,
    api_map: Option<ApiPermissionMap>,
    pipeline_cfg: TokenPipelineConfig,
}

fn load_inputs(config: &RunConfig, args: &PipelineArgs) -> Result<LoadedInputs> {
    let catalog = match &config.catalog {
        Some(path) => PermissionCatalog::load(path)?,
        None => PermissionCatalog::default_browser(),
    };
    let api_map = match &config.api_map {
        Some(path) => {
            let (map, violations) = ApiPermissionMap::load(path, &catalog)?;
            if !violations.is_empty() {
                log::warn!(
                    "API map: dropped {} mapping(s) to permissions not in the catalog",
                    violations.len()
                );
            }
            Some(map)
        }
        None => None,
    };
    let (corpus, report) = load_corpus(&config.corpus, &catalog)?;
    if !report.duplicate_ids.is_empty() {
        log::warn!(
            "corpus: {} duplicate id(s) dropped",
            report.duplicate_ids.len()
        );
    }
    if !report.unresolved_related.is_empty() {
        log::warn!(
            "corpus: {} unresolved related id(s)",
            report.unresolved_related.len()
        );
    }
    for w in report.field_warnings.iter().take(20) {
        log::info!("corpus: {w}");
    }

    let mut pipeline_cfg = TokenPipelineConfig::default();
    if let Some(path) = &args.stopwords {
        pipeline_cfg = pipeline_cfg.with_stopword_file(path)?;
    }
    if let Some(path) = &args.dictionary {
        pipeline_cfg = pipeline_cfg.with_dictionary_file(path)?;
    }

    Ok(LoadedInputs {
        corpus,
        catalog,
        api_map,
        pipeline_cfg,
    })
}

/// Builds the grouping run for the configured strategy, training a text
/// model in place or reusing a dump.
fn build_grouping(
    config: &RunConfig,
    args: &PipelineArgs,
    inputs: &LoadedInputs,
) -> Result<GroupingRun> {
    match config.strategy {
        Strategy::Category => Ok(groups_by_category(&inputs.corpus)),
        Strategy::RelatedItems => Ok(groups_by_related(&inputs.corpus)),
        Strategy::NaiveBayes => {
            let model = match &args.model {
                Some(path) => NaiveBayesModel::load(path)?,
                None => nb_train(&labeled_descriptions(&inputs.corpus), &inputs.pipeline_cfg)?,
            };
            groups_by_naive_bayes(&model, &inputs.corpus)
        }
        Strategy::Lda => {
            let model = match &args.model {
                Some(path) => LdaModel::load(path)?,
                None => lda_train(
                    &tokenized_descriptions(&inputs.corpus, &inputs.pipeline_cfg),
                    config.lda_topics,
                    config.lda_alpha,
                    config.lda_beta,
                    config.lda_iterations,
                    config.seed,
                )?,
            };
            groups_by_lda(&model, &inputs.corpus, config.assignment_threshold)
        }
    }
}

fn scoring_config<'a>(
    config: &RunConfig,
    inputs: &'a LoadedInputs,
    include_baseline: bool,
) -> ScoringConfig<'a> {
    ScoringConfig {
        threshold: config.threshold,
        mode: config.mode,
        aggregation: config.aggregation,
        min_group_size: config.min_group_size,
        yellow_max: config.yellow_max,
        include_baseline,
        catalog: &inputs.catalog,
        api_map: inputs.api_map.as_ref(),
    }
}

#[derive(Serialize)]
struct Manifest<'a> {
    command: &'a str,
    config: serde_json::Value,
    /// SHA-256 of every input file.
    input_digests: BTreeMap<String, String>,
    outputs: Vec<String>,
}

fn file_digest(path: &Path) -> Result<String> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

fn write_manifest(
    out_dir: &Path,
    command: &str,
    config: impl Serialize,
    inputs: &[&Path],
    outputs: &[PathBuf],
) -> Result<()> {
    let mut input_digests = BTreeMap::new();
    for path in inputs {
        input_digests.insert(path.display().to_string(), file_digest(path)?);
    }
    let manifest = Manifest {
        command,
        config: serde_json::to_value(config).expect("config serializes"),
        input_digests,
        outputs: outputs.iter().map(|p| p.display().to_string()).collect(),
    };
    let path = out_dir.join("manifest.json");
    let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    fs::write(&path, text).map_err(|e| Error::io(&path, e))
}

fn ensure_out_dir(path: &Path) -> Result<()> {
    fs::create_dir_all(path).map_err(|e| Error::io(path, e))
}

/// `generate`: writes a synthetic corpus, its planted truth, and the
/// matching catalog and API map.
pub fn cmd_generate(args: &GenerateArgs) -> Result<()> {
    let spec = SyntheticSpec {
        n_apps: args.apps,
        n_groups: args.groups,
        vocab_per_group: args.vocab_per_group,
        perms_per_group: args.perms_per_group,
        outlier_fraction: args.outlier_fraction,
        spurious_perms_per_outlier: args.spurious_per_outlier,
        suspension_bias: match &args.bias {
            Some(s) => s.parse()?,
            None => SuspensionBias::default(),
        },
        seed: args.seed,
    };
    let (corpus, truth) = generate_synthetic(&spec)?;

    ensure_out_dir(&args.out_dir)?;
    let corpus_path = args.out_dir.join("corpus.jsonl");
    let truth_path = args.out_dir.join("truth.json");
    let catalog_path = args.out_dir.join("catalog.json");
    let map_path = args.out_dir.join("api_map.json");

    save_corpus(&corpus, &corpus_path)?;
    fs::write(
        &truth_path,
        serde_json::to_string_pretty(&truth).expect("truth serializes"),
    )
    .map_err(|e| Error::io(&truth_path, e))?;
    synthetic_catalog(&corpus).save(&catalog_path)?;
    synthetic_api_map(&corpus).save(&map_path)?;

    let outputs = vec![corpus_path, truth_path, catalog_path, map_path];
    write_manifest(&args.out_dir, "generate", &spec, &[], &outputs)?;

    println!(
        "generated {} apps in {} groups ({} outliers) -> {}",
        corpus.len(),
        args.groups,
        truth.outliers.len(),
        args.out_dir.display()
    );
    Ok(())
}

/// `score`: the two-pass pipeline. Writes ranked reports (CSV and/or
/// JSONL), per-group baselines, and the run manifest.
pub fn cmd_score(args: &ScoreArgs) -> Result<()> {
    if !matches!(args.format.as_str(), "csv" | "jsonl" | "both") {
        return Err(Error::Config(format!(
            "unknown report format '{}' (expected csv, jsonl or both)",
            args.format
        )));
    }
    let config = RunConfig::resolve(&args.pipeline)?;
    let inputs = load_inputs(&config, &args.pipeline)?;

    let (reports, frequencies) = with_jobs(config.jobs, || {
        let run = build_grouping(&config, &args.pipeline, &inputs)?;
        let cfg = scoring_config(&config, &inputs, args.include_baseline);
        let frequencies = compute_frequencies(&run, &inputs.corpus, &cfg)?;
        let reports = rank(score_corpus(&run, &inputs.corpus, &cfg)?);
        Ok((reports, frequencies))
    })?;

    ensure_out_dir(&config.out_dir)?;
    let cfg = scoring_config(&config, &inputs, args.include_baseline);
    let mut outputs = Vec::new();
    if matches!(args.format.as_str(), "csv" | "both") {
        let path = config.out_dir.join("report.csv");
        write_reports_csv(&reports, &path)?;
        outputs.push(path);
    }
    if matches!(args.format.as_str(), "jsonl" | "both") {
        let path = config.out_dir.join("report.jsonl");
        write_reports_jsonl(&reports, &path)?;
        outputs.push(path);
    }
    let baselines_path = config.out_dir.join("baselines.json");
    write_baselines_json(&frequencies, &cfg, &baselines_path)?;
    outputs.push(baselines_path);

    let mut input_files: Vec<&Path> = vec![&config.corpus];
    input_files.extend(config.catalog.as_deref());
    input_files.extend(config.api_map.as_deref());
    write_manifest(&config.out_dir, "score", &config, &input_files, &outputs)?;

    let flagged = reports.iter().filter(|r| r.score > 0.0).count();
    println!(
        "scored {} apps in {} groups ({} flagged) -> {}",
        reports.len(),
        frequencies.len(),
        flagged,
        config.out_dir.display()
    );
    Ok(())
}

/// `baselines`: pass one only, writing each group's expected privileges.
pub fn cmd_baselines(args: &PipelineArgs) -> Result<()> {
    let config = RunConfig::resolve(args)?;
    let inputs = load_inputs(&config, args)?;
    let frequencies = with_jobs(config.jobs, || {
        let run = build_grouping(&config, args, &inputs)?;
        let cfg = scoring_config(&config, &inputs, false);
        compute_frequencies(&run, &inputs.corpus, &cfg)
    })?;

    ensure_out_dir(&config.out_dir)?;
    let cfg = scoring_config(&config, &inputs, false);
    let path = config.out_dir.join("baselines.json");
    write_baselines_json(&frequencies, &cfg, &path)?;
    let mut input_files: Vec<&Path> = vec![&config.corpus];
    input_files.extend(config.catalog.as_deref());
    input_files.extend(config.api_map.as_deref());
    write_manifest(
        &config.out_dir,
        "baselines",
        &config,
        &input_files,
        std::slice::from_ref(&path),
    )?;

    let total: usize = frequencies
        .values()
        .map(|f| baseline_privileges(f, &cfg).len())
        .sum();
    println!(
        "wrote baselines for {} groups ({} baseline privileges) -> {}",
        frequencies.len(),
        total,
        path.display()
    );
    Ok(())
}

/// `experiment <kind>`: runs one evaluation procedure and writes its CSV
/// table(s). File names carry the strategy, mode and threshold.
pub fn cmd_experiment(cmd: &ExperimentCmd) -> Result<()> {
    let args = cmd.pipeline();
    let config = RunConfig::resolve(args)?;
    let inputs = load_inputs(&config, args)?;

    let (result, stem): (SweepResult, String) = with_jobs(config.jobs, || {
        let run = build_grouping(&config, args, &inputs)?;
        let cfg = scoring_config(&config, &inputs, false);
        match cmd {
            ExperimentCmd::Threshold { thresholds, .. } => {
                if thresholds.is_empty() {
                    return Err(Error::Config("no thresholds given".into()));
                }
                let parsed: Vec<Ratio> = thresholds
                    .iter()
                    .map(|s| s.parse())
                    .collect::<Result<_>>()?;
                let result = threshold_sweep(&run, &inputs.corpus, &cfg, &parsed)?;
                Ok((
                    result,
                    format!("threshold_{}_{}", config.strategy, config.mode),
                ))
            }
            ExperimentCmd::Groupsize { buckets, .. } => {
                let parsed: Vec<SizeBucket> =
                    buckets.iter().map(|s| s.parse()).collect::<Result<_>>()?;
                let result = group_size_sweep(&run, &inputs.corpus, &cfg, &parsed)?;
                Ok((
                    result,
                    format!(
                        "groupsize_{}_{}_t{}",
                        config.strategy,
                        config.mode,
                        config.threshold.slug()
                    ),
                ))
            }
            ExperimentCmd::Privmode { modes, .. } => {
                let parsed: Vec<PrivilegeKind> =
                    modes.iter().map(|s| s.parse()).collect::<Result<_>>()?;
                let result = privilege_mode_comparison(&run, &inputs.corpus, &cfg, &parsed)?;
                Ok((
                    result,
                    format!("privmode_{}_t{}", config.strategy, config.threshold.slug()),
                ))
            }
            ExperimentCmd::Suspended {
                live,
                suspended,
                sample_seed,
                ..
            } => {
                let spec = SampleSpec {
                    n_live: *live,
                    n_suspended: *suspended,
                    seed: *sample_seed,
                };
                let result = suspended_correlation(&run, &inputs.corpus, &cfg, &spec)?;
                Ok((
                    result,
                    format!(
                        "suspended_{}_{}_t{}",
                        config.strategy,
                        config.mode,
                        config.threshold.slug()
                    ),
                ))
            }
        }
    })?;

    ensure_out_dir(&config.out_dir)?;
    let csv_path = config.out_dir.join(format!("{stem}.csv"));
    write_sweep_csv(&result, &csv_path)?;
    let mut outputs = vec![csv_path.clone()];
    if !result.bubble.is_empty() {
        let bubble_path = config.out_dir.join(format!("{stem}_bubble.csv"));
        write_bubble_csv(&result, &bubble_path)?;
        outputs.push(bubble_path);
    }

    let mut input_files: Vec<&Path> = vec![&config.corpus];
    input_files.extend(config.catalog.as_deref());
    input_files.extend(config.api_map.as_deref());
    write_manifest(
        &config.out_dir,
        "experiment",
        &config,
        &input_files,
        &outputs,
    )?;

    println!("wrote {}", csv_path.display());
    Ok(())
}

/// `train`: fits a Naive Bayes or LDA model and writes its dump. For NB
/// with a held-out split, prints the held-out accuracy.
pub fn cmd_train(args: &TrainArgs) -> Result<()> {
    require_file(&args.corpus)?;
    for path in [&args.catalog, &args.stopwords, &args.dictionary]
        .into_iter()
        .flatten()
    {
        require_file(path)?;
    }
    if !(0.0 < args.split && args.split <= 1.0) {
        return Err(Error::Config(format!(
            "split {} outside (0, 1]",
            args.split
        )));
    }

    let catalog = match &args.catalog {
        Some(path) => PermissionCatalog::load(path)?,
        None => PermissionCatalog::default_browser(),
    };
    let (corpus, _) = load_corpus(&args.corpus, &catalog)?;

    let mut pipeline_cfg = TokenPipelineConfig::default();
    if let Some(path) = &args.stopwords {
        pipeline_cfg = pipeline_cfg.with_stopword_file(path)?;
    }
    if let Some(path) = &args.dictionary {
        pipeline_cfg = pipeline_cfg.with_dictionary_file(path)?;
    }

    match args.model.as_str() {
        "nb" | "naive_bayes" => {
            let mut labeled = labeled_descriptions(&corpus);
            let (train, test) = split_labeled(&mut labeled, args.split, args.seed);
            let model = nb_train(train, &pipeline_cfg)?;
            model.save(&args.out)?;
            if !test.is_empty() {
                let eval = model.evaluate(test)?;
                println!("held-out accuracy: {:.4}", eval.accuracy);
            }
            println!(
                "trained naive_bayes on {} docs ({} classes) -> {}",
                train.len(),
                model.classes().len(),
                args.out.display()
            );
        }
        "lda" => {
            let docs = tokenized_descriptions(&corpus, &pipeline_cfg);
            let model = lda_train(
                &docs,
                args.topics,
                args.alpha,
                args.beta,
                args.iterations,
                args.seed,
            )?;
            model.save(&args.out)?;
            for k in 0..model.k {
                let words: Vec<String> = lda_top_words(&model, k, 5)?
                    .into_iter()
                    .map(|(w, _)| w)
                    .collect();
                println!("topic {k}: {}", words.join(" "));
            }
            println!(
                "trained lda (K={}, {} sweeps) on {} docs -> {}",
                model.k,
                model.iterations,
                docs.len(),
                args.out.display()
            );
        }
        other => {
            return Err(Error::Config(format!(
                "unknown model '{other}' (expected nb or lda)"
            )))
        }
    }
    Ok(())
}

type LabeledDoc = (String, String);

/// Seeded shuffle, then a front/back split at the training fraction.
fn split_labeled(
    labeled: &mut [LabeledDoc],
    split: f64,
    seed: u64,
) -> (&[LabeledDoc], &[LabeledDoc]) {
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    labeled.shuffle(&mut rng);
    let n_train = ((labeled.len() as f64 * split).round() as usize).clamp(1, labeled.len());
    labeled.split_at(n_train)
}
