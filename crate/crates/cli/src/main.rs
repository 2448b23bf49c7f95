//! `cluster-judge`: score clusterings against labels, relevance judgments,
//! or the corpus itself, reporting every measure as its divergence from
//! size-matched random baselines.
//!
//! Reports go to stdout (or `--out`); progress and seed echoes go to
//! stderr, so piping stdout always yields a clean, bit-identical report.
//! Exit status: 0 when every requested measure was computed, 1 when some
//! measure failed (the report still lists the rest), 2 on usage or input
//! errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use cluster_judge_core::baseline::{adjust, generate_baseline};
use cluster_judge_core::extrinsic::{
    entropy_per_cluster, macro_average, micro_average, nmi, pairwise_f1, purity_per_cluster,
};
use cluster_judge_core::formats::{
    parse_clustering, parse_corpus, parse_labels, parse_qrels, write_clustering,
};
use cluster_judge_core::model::build_contingency;
use cluster_judge_core::nccg::{self, SkipReason};
use cluster_judge_core::report::write_report;
use cluster_judge_core::vsm::{bm25_weight, k_sweep, kmeans, rmse, tfidf_weight};
use cluster_judge_core::{
    synth, Clustering, EvalReport, GroundTruth, RelevanceJudgments, ReportFormat, SparseCorpus,
};

#[derive(Parser)]
#[command(
    name = "cluster-judge",
    version,
    about = "Cluster-quality measures adjusted against size-matched random baselines"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Score one clustering with the requested measures
    Eval(EvalArgs),
    /// Synthesize a clustering with a known shape
    Generate(GenerateArgs),
    /// Score a range of cluster counts or a directory of clusterings
    Sweep(SweepArgs),
    /// Cluster a corpus with deterministic spherical k-means
    Kmeans(KmeansArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
}

impl From<OutputFormat> for ReportFormat {
    fn from(format: OutputFormat) -> Self {
        match format {
            OutputFormat::Json => ReportFormat::Json,
            OutputFormat::Csv => ReportFormat::Csv,
        }
    }
}

impl OutputFormat {
    fn name(self) -> &'static str {
        match self {
            OutputFormat::Json => "json",
            OutputFormat::Csv => "csv",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Weighting {
    Tfidf,
    Bm25,
}

impl Weighting {
    fn name(self) -> &'static str {
        match self {
            Weighting::Tfidf => "tfidf",
            Weighting::Bm25 => "bm25",
        }
    }
}

/// Measures the `eval` and `sweep` commands accept. `purity` and `entropy`
/// are the document-weighted (micro) averages; the `macro-` variants weight
/// every cluster equally.
#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MeasureKind {
    Purity,
    MacroPurity,
    Entropy,
    MacroEntropy,
    F1,
    Nmi,
    Nccg,
    Rmse,
}

impl MeasureKind {
    fn name(self) -> &'static str {
        match self {
            MeasureKind::Purity => "purity",
            MeasureKind::MacroPurity => "macro-purity",
            MeasureKind::Entropy => "entropy",
            MeasureKind::MacroEntropy => "macro-entropy",
            MeasureKind::F1 => "f1",
            MeasureKind::Nmi => "nmi",
            MeasureKind::Nccg => "nccg",
            MeasureKind::Rmse => "rmse",
        }
    }

    fn needs_labels(self) -> bool {
        !matches!(self, MeasureKind::Nccg | MeasureKind::Rmse)
    }
}

#[derive(Args)]
struct EvalArgs {
    /// Clustering to score (document<TAB>cluster lines)
    #[arg(long)]
    clusters: PathBuf,
    /// Ground-truth category labels (document<TAB>category lines)
    #[arg(long)]
    labels: Option<PathBuf>,
    /// Relevance judgments (topic iteration document relevance lines)
    #[arg(long)]
    qrels: Option<PathBuf>,
    /// Sparse term counts (document<TAB>term<TAB>count lines)
    #[arg(long)]
    corpus: Option<PathBuf>,
    /// Measures to compute (comma-separated)
    #[arg(long, required = true, value_delimiter = ',')]
    measures: Vec<MeasureKind>,
    /// Random baselines drawn per measure
    #[arg(long, default_value_t = 10)]
    baseline_samples: usize,
    /// Root seed; defaults to $CLUSTER_JUDGE_SEED, then system entropy
    #[arg(long)]
    seed: Option<u64>,
    /// Report encoding
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,
    /// Term weighting applied to the corpus before rmse
    #[arg(long, value_enum, default_value_t = Weighting::Tfidf)]
    weighting: Weighting,
    /// BM25 term-frequency saturation (with --weighting bm25)
    #[arg(long, default_value_t = 1.2)]
    k1: f64,
    /// BM25 length normalization in [0, 1] (with --weighting bm25)
    #[arg(long, default_value_t = 0.75)]
    b: f64,
    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Shape {
    /// Every document in its own cluster
    Singletons,
    /// One giant cluster plus singletons
    Giant,
    /// Each document assigned to one of k clusters uniformly at random
    UniformRandomK,
    /// Random shuffle matching the size profile of --clusters
    SizeMatchedRandom,
}

impl Shape {
    fn name(self) -> &'static str {
        match self {
            Shape::Singletons => "singletons",
            Shape::Giant => "giant",
            Shape::UniformRandomK => "uniform-random-k",
            Shape::SizeMatchedRandom => "size-matched-random",
        }
    }
}

#[derive(Args)]
struct GenerateArgs {
    /// Clustering shape to synthesize
    #[arg(long, value_enum)]
    shape: Shape,
    /// Number of documents (every shape except size-matched-random)
    #[arg(long)]
    docs: Option<usize>,
    /// Cluster count for uniform-random-k
    #[arg(long)]
    k: Option<usize>,
    /// Fraction of documents in the giant cluster
    #[arg(long, default_value_t = 0.6)]
    giant_fraction: f64,
    /// Clustering whose size profile size-matched-random reproduces
    #[arg(long)]
    clusters: Option<PathBuf>,
    /// Root seed; defaults to $CLUSTER_JUDGE_SEED, then system entropy
    #[arg(long)]
    seed: Option<u64>,
    /// Write the clustering here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// Directory of clustering files, one per candidate solution
    #[arg(long)]
    clusters: Option<PathBuf>,
    /// Ground-truth category labels (directory sweeps)
    #[arg(long)]
    labels: Option<PathBuf>,
    /// Relevance judgments (directory sweeps)
    #[arg(long)]
    qrels: Option<PathBuf>,
    /// Sparse term counts; required for k sweeps and rmse
    #[arg(long)]
    corpus: Option<PathBuf>,
    /// Cluster counts to try with k-means (comma-separated)
    #[arg(long, value_delimiter = ',')]
    ks: Vec<usize>,
    /// Measures per clustering (directory sweeps; k sweeps score rmse)
    #[arg(long, value_delimiter = ',')]
    measures: Vec<MeasureKind>,
    /// Random baselines drawn per measure
    #[arg(long, default_value_t = 10)]
    baseline_samples: usize,
    /// Root seed; defaults to $CLUSTER_JUDGE_SEED, then system entropy
    #[arg(long)]
    seed: Option<u64>,
    /// Report encoding
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,
    /// Term weighting applied to the corpus
    #[arg(long, value_enum, default_value_t = Weighting::Tfidf)]
    weighting: Weighting,
    /// BM25 term-frequency saturation (with --weighting bm25)
    #[arg(long, default_value_t = 1.2)]
    k1: f64,
    /// BM25 length normalization in [0, 1] (with --weighting bm25)
    #[arg(long, default_value_t = 0.75)]
    b: f64,
    /// k-means iteration cap (k sweeps)
    #[arg(long, default_value_t = 100)]
    max_iter: usize,
    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct KmeansArgs {
    /// Corpus to cluster (document<TAB>term<TAB>count lines)
    #[arg(long)]
    corpus: PathBuf,
    /// Number of clusters
    #[arg(long)]
    k: usize,
    /// Term weighting applied before clustering
    #[arg(long, value_enum, default_value_t = Weighting::Tfidf)]
    weighting: Weighting,
    /// BM25 term-frequency saturation (with --weighting bm25)
    #[arg(long, default_value_t = 1.2)]
    k1: f64,
    /// BM25 length normalization in [0, 1] (with --weighting bm25)
    #[arg(long, default_value_t = 0.75)]
    b: f64,
    /// Iteration cap
    #[arg(long, default_value_t = 100)]
    max_iter: usize,
    /// Root seed; defaults to $CLUSTER_JUDGE_SEED, then system entropy
    #[arg(long)]
    seed: Option<u64>,
    /// Write the clustering here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Eval(args) => cmd_eval(args),
        Command::Generate(args) => cmd_generate(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Kmeans(args) => cmd_kmeans(args),
    };
    match result {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

/// --seed wins, then a parseable $CLUSTER_JUDGE_SEED, then system entropy.
/// A set-but-unparsable variable is an error rather than a silent random
/// run, so a typo cannot masquerade as a reproducible result.
fn resolve_seed(explicit: Option<u64>) -> Result<u64> {
    if let Some(seed) = explicit {
        return Ok(seed);
    }
    match std::env::var("CLUSTER_JUDGE_SEED") {
        Ok(raw) => raw
            .trim()
            .parse::<u64>()
            .with_context(|| format!("CLUSTER_JUDGE_SEED must be an unsigned integer, got {raw:?}")),
        Err(std::env::VarError::NotPresent) => Ok(rand::random()),
        Err(err) => Err(err).context("reading CLUSTER_JUDGE_SEED"),
    }
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_clustering(path: &Path) -> Result<Clustering> {
    parse_clustering(&read_text(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn read_labels(path: &Path) -> Result<GroundTruth> {
    parse_labels(&read_text(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn read_qrels(path: &Path) -> Result<RelevanceJudgments> {
    parse_qrels(&read_text(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn read_weighted_corpus(path: &Path, weighting: Weighting, k1: f64, b: f64) -> Result<SparseCorpus> {
    let raw = parse_corpus(&read_text(path)?).with_context(|| format!("parsing {}", path.display()))?;
    let weighted = match weighting {
        Weighting::Tfidf => tfidf_weight(&raw),
        Weighting::Bm25 => bm25_weight(&raw, k1, b),
    };
    weighted.with_context(|| format!("weighting {}", path.display()))
}

fn write_output(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => {
            fs::write(path, text).with_context(|| format!("writing {}", path.display()))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_report(report: &EvalReport, format: OutputFormat, out: Option<&Path>) -> Result<()> {
    let text = write_report(report, format.into())?;
    write_output(&text, out)
}

fn path_value(path: &Path) -> String {
    path.display().to_string()
}

fn measure_list(measures: &[MeasureKind]) -> String {
    measures.iter().map(|m| m.name()).collect::<Vec<_>>().join(",")
}

/// Everything a measure closure might need; sweeps reuse it per file.
struct EvalInputs {
    labels: Option<GroundTruth>,
    qrels: Option<RelevanceJudgments>,
    corpus: Option<SparseCorpus>,
}

/// Label measures silently score only the documents present on both
/// sides, so partial overlap is worth a note in the report.
fn note_label_coverage(
    clustering: &Clustering,
    inputs: &EvalInputs,
    prefix: &str,
    report: &mut EvalReport,
) {
    let Some(truth) = inputs.labels.as_ref() else {
        return;
    };
    if let Ok(table) = build_contingency(clustering, truth) {
        if table.only_in_clustering() > 0 || table.only_in_truth() > 0 {
            report.push_diagnostic(format!(
                "{prefix}label measures cover {} document(s); {} clustered without a label, {} labeled but not clustered",
                table.total(),
                table.only_in_clustering(),
                table.only_in_truth()
            ));
        }
    }
}

/// Computes one baseline-adjusted measure and appends its row (and, for
/// nccg, per-topic detail and skip diagnostics). A missing input or a
/// degenerate instance becomes the error message for the report rather
/// than aborting the run, so the remaining measures still get scored.
fn score_measure(
    kind: MeasureKind,
    clustering: &Clustering,
    inputs: &EvalInputs,
    seed: u64,
    samples: usize,
    report: &mut EvalReport,
) -> std::result::Result<(), String> {
    let k = clustering.num_clusters();
    match kind {
        MeasureKind::Purity
        | MeasureKind::MacroPurity
        | MeasureKind::Entropy
        | MeasureKind::MacroEntropy
        | MeasureKind::F1
        | MeasureKind::Nmi => {
            let truth = inputs
                .labels
                .as_ref()
                .ok_or_else(|| format!("{} requires ground-truth labels", kind.name()))?;
            let score = adjust(clustering, seed, samples, |candidate| {
                let table = build_contingency(candidate, truth)?;
                Ok(match kind {
                    MeasureKind::Purity => micro_average(&purity_per_cluster(&table)?),
                    MeasureKind::MacroPurity => macro_average(&purity_per_cluster(&table)?),
                    MeasureKind::Entropy => micro_average(&entropy_per_cluster(&table)?),
                    MeasureKind::MacroEntropy => macro_average(&entropy_per_cluster(&table)?),
                    MeasureKind::F1 => pairwise_f1(&table),
                    MeasureKind::Nmi => nmi(&table),
                    _ => unreachable!("non-label measure in label arm"),
                })
            })
            .map_err(|err| err.to_string())?;
            report.push_row(k, kind.name(), score, None);
        }
        MeasureKind::Nccg => {
            let judgments = inputs
                .qrels
                .as_ref()
                .ok_or_else(|| "nccg requires relevance judgments".to_string())?;
            let evaluation =
                nccg::evaluate(clustering, judgments).map_err(|err| err.to_string())?;
            for (topic, reason) in &evaluation.skipped {
                let why = match reason {
                    SkipReason::NoRelevantDocuments => "no relevant documents",
                    SkipReason::NoneClustered => "no relevant document appears in the clustering",
                };
                report.push_diagnostic(format!("nccg: topic {topic} skipped: {why}"));
            }
            if evaluation.missing_relevant > 0 {
                report.push_diagnostic(format!(
                    "nccg: {} relevant document(s) missing from the clustering",
                    evaluation.missing_relevant
                ));
            }
            let score = adjust(clustering, seed, samples, |candidate| {
                nccg::nccg_mean(candidate, judgments).map_err(Into::into)
            })
            .map_err(|err| err.to_string())?;
            report.push_row(k, kind.name(), score, Some(evaluation.topics));
        }
        MeasureKind::Rmse => {
            let corpus = inputs
                .corpus
                .as_ref()
                .ok_or_else(|| "rmse requires a corpus".to_string())?;
            let score = adjust(clustering, seed, samples, |candidate| {
                rmse(corpus, candidate).map_err(Into::into)
            })
            .map_err(|err| err.to_string())?;
            report.push_row(k, kind.name(), score, None);
        }
    }
    Ok(())
}

fn cmd_eval(args: EvalArgs) -> Result<ExitCode> {
    let seed = resolve_seed(args.seed)?;
    let clustering = read_clustering(&args.clusters)?;
    let inputs = EvalInputs {
        labels: args.labels.as_deref().map(read_labels).transpose()?,
        qrels: args.qrels.as_deref().map(read_qrels).transpose()?,
        corpus: args
            .corpus
            .as_deref()
            .map(|path| read_weighted_corpus(path, args.weighting, args.k1, args.b))
            .transpose()?,
    };

    let mut config = vec![
        ("command".to_string(), "eval".to_string()),
        ("clusters".to_string(), path_value(&args.clusters)),
    ];
    if let Some(path) = &args.labels {
        config.push(("labels".to_string(), path_value(path)));
    }
    if let Some(path) = &args.qrels {
        config.push(("qrels".to_string(), path_value(path)));
    }
    if let Some(path) = &args.corpus {
        config.push(("corpus".to_string(), path_value(path)));
        config.push(("weighting".to_string(), args.weighting.name().to_string()));
        if args.weighting == Weighting::Bm25 {
            config.push(("k1".to_string(), format!("{}", args.k1)));
            config.push(("b".to_string(), format!("{}", args.b)));
        }
    }
    config.push(("measures".to_string(), measure_list(&args.measures)));
    config.push(("baseline-samples".to_string(), args.baseline_samples.to_string()));
    config.push(("seed".to_string(), seed.to_string()));
    config.push(("format".to_string(), args.format.name().to_string()));

    let mut report = EvalReport::new(config);
    eprintln!("seed: {seed}");
    if args.measures.iter().any(|m| m.needs_labels()) {
        note_label_coverage(&clustering, &inputs, "", &mut report);
    }

    let mut failures = 0usize;
    for &measure in &args.measures {
        if let Err(message) =
            score_measure(measure, &clustering, &inputs, seed, args.baseline_samples, &mut report)
        {
            eprintln!("measure {} failed: {message}", measure.name());
            report.push_error(measure.name(), message);
            failures += 1;
        }
    }

    emit_report(&report, args.format, args.out.as_deref())?;
    Ok(if failures == 0 { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn cmd_generate(args: GenerateArgs) -> Result<ExitCode> {
    let seed = resolve_seed(args.seed)?;
    let docs_of = |args: &GenerateArgs| -> Result<Vec<cluster_judge_core::DocId>> {
        let n = args
            .docs
            .with_context(|| format!("--docs is required for --shape {}", args.shape.name()))?;
        if n == 0 {
            bail!("--docs must be at least 1");
        }
        Ok(synth::doc_ids(n))
    };

    let clustering = match args.shape {
        Shape::Singletons => synth::all_singletons(&docs_of(&args)?),
        Shape::Giant => {
            if !(args.giant_fraction > 0.0 && args.giant_fraction <= 1.0) {
                bail!("--giant-fraction must be in (0, 1]");
            }
            synth::giant_with_singletons(&docs_of(&args)?, args.giant_fraction)
        }
        Shape::UniformRandomK => {
            let k = args.k.context("--k is required for --shape uniform-random-k")?;
            if k == 0 {
                bail!("--k must be at least 1");
            }
            synth::uniform_random_k(&docs_of(&args)?, k, seed)
        }
        Shape::SizeMatchedRandom => {
            let path = args
                .clusters
                .as_deref()
                .context("--clusters is required for --shape size-matched-random")?;
            generate_baseline(&read_clustering(path)?, seed)
        }
    };

    eprintln!("seed: {seed}");
    eprintln!(
        "generated {} documents in {} clusters",
        clustering.num_docs(),
        clustering.num_clusters()
    );
    write_output(&write_clustering(&clustering), args.out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_sweep(args: SweepArgs) -> Result<ExitCode> {
    match (&args.clusters, args.ks.is_empty()) {
        (Some(_), false) => {
            bail!("--clusters and --ks are mutually exclusive: sweep either a directory of clusterings or a range of k-means sizes")
        }
        (None, true) => {
            bail!("sweep needs --clusters <directory> or --corpus with --ks <list>")
        }
        (Some(dir), true) => sweep_directory(&args, dir),
        (None, false) => sweep_ks(&args),
    }
}

/// Runs k-means at every requested k and reports baseline-adjusted rmse
/// per k, producing the trend table used to compare cluster counts.
fn sweep_ks(args: &SweepArgs) -> Result<ExitCode> {
    if !args.measures.is_empty() && args.measures != [MeasureKind::Rmse] {
        bail!("a k sweep always scores rmse; --measures selects measures for directory sweeps");
    }
    let corpus_path = args.corpus.as_deref().context("--ks needs --corpus")?;
    let seed = resolve_seed(args.seed)?;
    let corpus = read_weighted_corpus(corpus_path, args.weighting, args.k1, args.b)?;

    let ks_value = args.ks.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(",");
    let mut config = vec![
        ("command".to_string(), "sweep".to_string()),
        ("corpus".to_string(), path_value(corpus_path)),
        ("weighting".to_string(), args.weighting.name().to_string()),
    ];
    if args.weighting == Weighting::Bm25 {
        config.push(("k1".to_string(), format!("{}", args.k1)));
        config.push(("b".to_string(), format!("{}", args.b)));
    }
    config.push(("ks".to_string(), ks_value));
    config.push(("max-iter".to_string(), args.max_iter.to_string()));
    config.push(("baseline-samples".to_string(), args.baseline_samples.to_string()));
    config.push(("seed".to_string(), seed.to_string()));
    config.push(("format".to_string(), args.format.name().to_string()));

    let mut report = EvalReport::new(config);
    eprintln!("seed: {seed}");

    let points = k_sweep(&corpus, &args.ks, seed, args.baseline_samples, args.max_iter)
        .context("k sweep failed")?;
    for point in points {
        report.push_row(point.k, "rmse", point.score, None);
    }

    emit_report(&report, args.format, args.out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

/// Scores every clustering file in a directory (sorted by file name) with
/// the requested measures, one report row per clustering and measure.
fn sweep_directory(args: &SweepArgs, dir: &Path) -> Result<ExitCode> {
    if args.measures.is_empty() {
        bail!("directory sweeps need --measures");
    }
    let seed = resolve_seed(args.seed)?;
    let inputs = EvalInputs {
        labels: args.labels.as_deref().map(read_labels).transpose()?,
        qrels: args.qrels.as_deref().map(read_qrels).transpose()?,
        corpus: args
            .corpus
            .as_deref()
            .map(|path| read_weighted_corpus(path, args.weighting, args.k1, args.b))
            .transpose()?,
    };

    let entries = fs::read_dir(dir)
        .with_context(|| format!("reading directory {}", dir.display()))?
        .map(|entry| entry.map(|e| e.path()))
        .collect::<std::io::Result<Vec<PathBuf>>>()
        .with_context(|| format!("reading directory {}", dir.display()))?;
    let mut files: Vec<PathBuf> = entries.into_iter().filter(|path| path.is_file()).collect();
    files.sort();
    if files.is_empty() {
        bail!("no clustering files found in {}", dir.display());
    }

    let mut config = vec![
        ("command".to_string(), "sweep".to_string()),
        ("clusters".to_string(), path_value(dir)),
    ];
    if let Some(path) = &args.labels {
        config.push(("labels".to_string(), path_value(path)));
    }
    if let Some(path) = &args.qrels {
        config.push(("qrels".to_string(), path_value(path)));
    }
    if let Some(path) = &args.corpus {
        config.push(("corpus".to_string(), path_value(path)));
        config.push(("weighting".to_string(), args.weighting.name().to_string()));
        if args.weighting == Weighting::Bm25 {
            config.push(("k1".to_string(), format!("{}", args.k1)));
            config.push(("b".to_string(), format!("{}", args.b)));
        }
    }
    config.push(("measures".to_string(), measure_list(&args.measures)));
    config.push(("baseline-samples".to_string(), args.baseline_samples.to_string()));
    config.push(("seed".to_string(), seed.to_string()));
    config.push(("format".to_string(), args.format.name().to_string()));

    let mut report = EvalReport::new(config);
    eprintln!("seed: {seed}");

    let mut failures = 0usize;
    for path in &files {
        let clustering = read_clustering(path)?;
        let file_name = path
            .file_name()
            .map(|name| name.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string());
        report.push_diagnostic(format!(
            "{file_name}: {} documents in {} clusters",
            clustering.num_docs(),
            clustering.num_clusters()
        ));
        if args.measures.iter().any(|m| m.needs_labels()) {
            note_label_coverage(&clustering, &inputs, &format!("{file_name}: "), &mut report);
        }
        for &measure in &args.measures {
            if let Err(message) = score_measure(
                measure,
                &clustering,
                &inputs,
                seed,
                args.baseline_samples,
                &mut report,
            ) {
                eprintln!("{file_name}: measure {} failed: {message}", measure.name());
                report.push_error(format!("{file_name}: {}", measure.name()), message);
                failures += 1;
            }
        }
    }

    emit_report(&report, args.format, args.out.as_deref())?;
    Ok(if failures == 0 { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn cmd_kmeans(args: KmeansArgs) -> Result<ExitCode> {
    let seed = resolve_seed(args.seed)?;
    let corpus = read_weighted_corpus(&args.corpus, args.weighting, args.k1, args.b)?;
    let result = kmeans(&corpus, args.k, seed, args.max_iter).context("k-means failed")?;

    eprintln!("seed: {seed}");
    eprintln!(
        "k-means: k={} iterations={} converged={} mean-cosine={:.6}",
        args.k,
        result.iterations,
        result.converged,
        result.mean_cosine_history.last().copied().unwrap_or(0.0)
    );
    write_output(&write_clustering(&result.clustering), args.out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}
