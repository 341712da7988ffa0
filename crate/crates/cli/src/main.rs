//! Command-line driver for the classification audit pipeline.
//!
//! Every subcommand computes its complete output in memory, stages the
//! files in a temporary directory next to the target, and renames them into
//! place only on success: a failing run leaves no partial outputs behind.
//! Exit codes are stable: 0 for success, 1 for validation problems (bad
//! rows, unknown keys, invalid config), 2 for I/O problems. Reports are
//! byte-identical across runs and thread counts; wall-clock timestamps
//! appear only inside `manifest.json`.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use chrono::{SecondsFormat, Utc};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sha2::{Digest, Sha256};

use jcaudit_core::corpus::tsv::{self, CorpusPaths};
use jcaudit_core::report;
use jcaudit_core::{
    build_coupling_profiles, build_profiles, combined, combined_tsv, compare_relation_kinds,
    comparison_tsv, criterion_one, criterion_two, flags_tsv, generate, load_corpus, profiles_tsv,
    AuditConfig, ConfigError, Corpus, CorpusError, CouplingError, SynthError, SyntheticSpec,
    Threshold,
};

const MANIFEST_FILE: &str = "manifest.json";

#[derive(Parser)]
#[command(
    name = "jcaudit",
    version,
    about = "Audit journal classification systems against citation behavior"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full audit: statistics, threshold sweeps, rankings, flags, and the
    /// combined-criteria report.
    Audit(AuditArgs),
    /// Corpus statistics and the assignment distribution.
    Stats(StatsArgs),
    /// Close-up of one category: weak members, strong outsiders, weak
    /// secondary assignments.
    Drilldown(DrilldownArgs),
    /// Compare strongest categories under direct citations vs bibliographic
    /// coupling for one category's journals.
    Couple(CoupleArgs),
    /// Generate a synthetic corpus with planted classification errors.
    Synth(SynthArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Tsv,
    Json,
}

#[derive(Args)]
struct CorpusOpts {
    /// Directory holding the corpus tables (journals.tsv, categories.tsv,
    /// assignments.tsv, publications.tsv, citations.tsv, references.tsv).
    corpus: PathBuf,
    /// Flat key=value config file; command-line flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Suppress journals below this citation total from flags and reports.
    #[arg(long)]
    min_citations: Option<u64>,
    /// Worker threads for aggregation; defaults to machine parallelism.
    /// Results do not depend on this.
    #[arg(long)]
    threads: Option<usize>,
    /// Output format for tables available in both forms.
    #[arg(long, value_enum, default_value_t = Format::Tsv)]
    format: Format,
}

#[derive(Args)]
struct AuditArgs {
    #[command(flatten)]
    common: CorpusOpts,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
    /// Replace the criterion-one threshold sweep (comma-separated).
    #[arg(long, value_parser = parse_threshold, value_delimiter = ',')]
    alpha: Option<Vec<Threshold>>,
    /// Replace the criterion-two threshold sweep (comma-separated).
    #[arg(long, value_parser = parse_threshold, value_delimiter = ',')]
    beta: Option<Vec<Threshold>>,
}

#[derive(Args)]
struct StatsArgs {
    #[command(flatten)]
    common: CorpusOpts,
    /// Output directory; without it the tables print to standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DrilldownArgs {
    #[command(flatten)]
    common: CorpusOpts,
    /// Category id to examine.
    category: String,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
    /// Weak-relation cutoff for this report.
    #[arg(long, value_parser = parse_threshold)]
    alpha: Option<Threshold>,
    /// Strong-relation cutoff for this report.
    #[arg(long, value_parser = parse_threshold)]
    beta: Option<Threshold>,
}

#[derive(Args)]
struct CoupleArgs {
    #[command(flatten)]
    common: CorpusOpts,
    /// Category id whose journals are compared.
    category: String,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SynthArgs {
    /// Generator spec as JSON; omitted fields take their defaults.
    #[arg(long)]
    spec: PathBuf,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
}

fn parse_threshold(s: &str) -> Result<Threshold, String> {
    Threshold::parse(s).map_err(|e| e.to_string())
}

// ===== error handling =====

/// Failures split by exit code: validation problems exit 1, I/O problems
/// exit 2.
enum CliError {
    Validation(String),
    Io(String),
}

impl CliError {
    fn code(&self) -> ExitCode {
        match self {
            CliError::Validation(_) => ExitCode::from(1),
            CliError::Io(_) => ExitCode::from(2),
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Validation(m) | CliError::Io(m) => m,
        }
    }
}

impl From<CorpusError> for CliError {
    fn from(e: CorpusError) -> Self {
        match e {
            CorpusError::MissingFile { .. } | CorpusError::Io { .. } => {
                CliError::Io(e.to_string())
            }
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        match e {
            ConfigError::Io { .. } => CliError::Io(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<CouplingError> for CliError {
    fn from(e: CouplingError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<SynthError> for CliError {
    fn from(e: SynthError) -> Self {
        match e {
            SynthError::SpecIo { .. } | SynthError::OutputIo { .. } => CliError::Io(e.to_string()),
            SynthError::Corpus(inner) => inner.into(),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

fn io_err(context: &str, e: std::io::Error) -> CliError {
    CliError::Io(format!("{context}: {e}"))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.code()
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Audit(args) => in_pool(args.common.threads, || cmd_audit(&args)),
        Command::Stats(args) => in_pool(args.common.threads, || cmd_stats(&args)),
        Command::Drilldown(args) => in_pool(args.common.threads, || cmd_drilldown(&args)),
        Command::Couple(args) => in_pool(args.common.threads, || cmd_couple(&args)),
        Command::Synth(args) => cmd_synth(&args),
    }
}

/// Runs `f` inside a bounded worker pool when `--threads` is given.
fn in_pool<T>(
    threads: Option<usize>,
    f: impl FnOnce() -> Result<T, CliError> + Send,
) -> Result<T, CliError>
where
    T: Send,
{
    match threads {
        None => f(),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::Validation(format!("could not set up {n} threads: {e}")))?;
            pool.install(f)
        }
    }
}

// ===== shared plumbing =====

fn effective_config(common: &CorpusOpts) -> Result<AuditConfig, CliError> {
    let mut cfg = match &common.config {
        Some(path) => AuditConfig::from_file(path)?,
        None => AuditConfig::default(),
    };
    if let Some(m) = common.min_citations {
        cfg.min_citations = m;
    }
    Ok(cfg)
}

fn load(common: &CorpusOpts, cfg: &AuditConfig) -> Result<Corpus, CliError> {
    Ok(load_corpus(&CorpusPaths::from_dir(&common.corpus), cfg)?)
}

/// A fully assembled output set, committed atomically.
struct OutputSet {
    files: Vec<(String, Vec<u8>)>,
}

impl OutputSet {
    fn new() -> Self {
        OutputSet { files: Vec::new() }
    }

    fn push(&mut self, name: impl Into<String>, content: impl Into<Vec<u8>>) {
        self.files.push((name.into(), content.into()));
    }

    fn names(&self) -> Vec<&str> {
        let mut names: Vec<&str> = self.files.iter().map(|(n, _)| n.as_str()).collect();
        names.sort_unstable();
        names
    }

    /// Stages every file in a temporary sibling directory, then renames
    /// into `out_dir`. Nothing lands in `out_dir` unless all writes
    /// succeed.
    fn commit(self, out_dir: &Path) -> Result<(), CliError> {
        let parent = match out_dir.parent() {
            Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
            _ => PathBuf::from("."),
        };
        fs::create_dir_all(&parent)
            .map_err(|e| io_err(&format!("could not create {}", parent.display()), e))?;
        let stage = tempfile::Builder::new()
            .prefix(".jcaudit-stage-")
            .tempdir_in(&parent)
            .map_err(|e| io_err("could not create staging directory", e))?;
        for (name, bytes) in &self.files {
            fs::write(stage.path().join(name), bytes)
                .map_err(|e| io_err(&format!("could not write {name}"), e))?;
        }
        fs::create_dir_all(out_dir)
            .map_err(|e| io_err(&format!("could not create {}", out_dir.display()), e))?;
        for (name, _) in &self.files {
            fs::rename(stage.path().join(name), out_dir.join(name))
                .map_err(|e| io_err(&format!("could not move {name} into place"), e))?;
        }
        Ok(())
    }
}

#[derive(Serialize)]
struct RunManifest<'a> {
    tool: String,
    command: &'a str,
    started_utc: String,
    finished_utc: String,
    config: &'a AuditConfig,
    /// SHA-256 of every input file, keyed by file name.
    inputs: BTreeMap<String, String>,
    outputs: Vec<&'a str>,
}

fn timestamp() -> String {
    Utc::now().to_rfc3339_opts(SecondsFormat::Secs, true)
}

fn digest_inputs(corpus_dir: &Path) -> Result<BTreeMap<String, String>, CliError> {
    let mut digests = BTreeMap::new();
    let names = [
        tsv::JOURNALS_FILE,
        tsv::CATEGORIES_FILE,
        tsv::ASSIGNMENTS_FILE,
        tsv::PUBLICATIONS_FILE,
        tsv::CITATIONS_FILE,
        tsv::REFERENCES_FILE,
    ];
    for name in names {
        let path = corpus_dir.join(name);
        if name == tsv::REFERENCES_FILE && !path.exists() {
            continue;
        }
        let bytes =
            fs::read(&path).map_err(|e| io_err(&format!("could not read {}", path.display()), e))?;
        digests.insert(name.to_owned(), hex::encode(Sha256::digest(&bytes)));
    }
    Ok(digests)
}

fn finish_with_manifest(
    mut out: OutputSet,
    command: &str,
    started: String,
    cfg: &AuditConfig,
    corpus_dir: &Path,
    out_dir: &Path,
) -> Result<(), CliError> {
    let inputs = digest_inputs(corpus_dir)?;
    let mut names = out.names();
    names.push(MANIFEST_FILE);
    names.sort_unstable();
    let manifest = RunManifest {
        tool: format!("jcaudit {}", env!("CARGO_PKG_VERSION")),
        command,
        started_utc: started,
        finished_utc: timestamp(),
        config: cfg,
        inputs,
        outputs: names,
    };
    let mut doc =
        serde_json::to_string_pretty(&manifest).expect("manifest serialization cannot fail");
    doc.push('\n');
    out.push(MANIFEST_FILE, doc);
    out.commit(out_dir)
}

/// Replaces characters that are awkward in file names.
fn sanitize(id: &str) -> String {
    id.chars()
        .map(|c| if c.is_ascii_alphanumeric() || ".-_".contains(c) { c } else { '_' })
        .collect()
}

fn ext(format: Format) -> &'static str {
    match format {
        Format::Tsv => "tsv",
        Format::Json => "json",
    }
}

// ===== subcommands =====

fn cmd_audit(args: &AuditArgs) -> Result<(), CliError> {
    let started = timestamp();
    let mut cfg = effective_config(&args.common)?;
    if let Some(alpha) = &args.alpha {
        cfg.alpha_list = alpha.clone();
    }
    if let Some(beta) = &args.beta {
        cfg.beta_list = beta.clone();
    }
    cfg.validate().map_err(CliError::from)?;
    let corpus = load(&args.common, &cfg)?;
    let ps = build_profiles(&corpus);
    let fmt = args.common.format;

    let mut out = OutputSet::new();
    out.push("profiles.tsv", profiles_tsv(&ps, &corpus));

    let stats = report::corpus_stats(&corpus, &ps, &cfg);
    match fmt {
        Format::Tsv => out.push("stats.tsv", report::stats_tsv(&stats)),
        Format::Json => out.push("stats.json", report::stats_json(&stats)),
    }
    out.push("distribution.csv", report::distribution_csv(&report::assignment_distribution(&corpus)));

    let sweep = report::threshold_sweep(&ps, &corpus, &cfg);
    match fmt {
        Format::Tsv => {
            out.push("sweep_c1.tsv", report::sweep_c1_tsv(&sweep.c1));
            out.push("sweep_c2.tsv", report::sweep_c2_tsv(&sweep.c2));
        }
        Format::Json => {
            out.push("sweep_c1.json", report::sweep_json(&sweep.c1));
            out.push("sweep_c2.json", report::sweep_json(&sweep.c2));
        }
    }

    for alpha in &cfg.alpha_list {
        let flags = criterion_one(&ps, &corpus, alpha, &cfg);
        out.push(format!("flags_c1_{alpha}.tsv"), flags_tsv(&flags, &corpus));
        let rows = report::rank_problem_categories(
            &ps,
            &corpus,
            alpha,
            cfg.min_category_journals,
            &cfg.min_flagged_fraction,
            &cfg,
        );
        match fmt {
            Format::Tsv => {
                out.push(format!("rank_c1_{alpha}.tsv"), report::rank_c1_tsv(&rows, &corpus))
            }
            Format::Json => {
                out.push(format!("rank_c1_{alpha}.json"), report::rank_c1_json(&rows, &corpus))
            }
        }
    }
    for beta in &cfg.beta_list {
        let flags = criterion_two(&ps, &corpus, beta, &cfg);
        out.push(format!("flags_c2_{beta}.tsv"), flags_tsv(&flags, &corpus));
        let rows =
            report::rank_missing_categories(&ps, &corpus, beta, cfg.min_missing_count, &cfg);
        match fmt {
            Format::Tsv => {
                out.push(format!("rank_c2_{beta}.tsv"), report::rank_c2_tsv(&rows, &corpus))
            }
            Format::Json => {
                out.push(format!("rank_c2_{beta}.json"), report::rank_c2_json(&rows, &corpus))
            }
        }
    }

    let records = combined(&ps, &corpus, &cfg.combined_alpha, &cfg.combined_beta, &cfg);
    out.push(
        format!("combined_{}_{}.tsv", cfg.combined_alpha, cfg.combined_beta),
        combined_tsv(&records, &corpus),
    );

    finish_with_manifest(out, "audit", started, &cfg, &args.common.corpus, &args.out)
}

fn cmd_stats(args: &StatsArgs) -> Result<(), CliError> {
    let started = timestamp();
    let cfg = effective_config(&args.common)?;
    cfg.validate().map_err(CliError::from)?;
    let corpus = load(&args.common, &cfg)?;
    let ps = build_profiles(&corpus);
    let stats = report::corpus_stats(&corpus, &ps, &cfg);
    let distribution = report::distribution_csv(&report::assignment_distribution(&corpus));
    let rendered = match args.common.format {
        Format::Tsv => report::stats_tsv(&stats),
        Format::Json => report::stats_json(&stats),
    };
    match &args.out {
        None => {
            print!("{rendered}");
            println!();
            print!("{distribution}");
            Ok(())
        }
        Some(out_dir) => {
            let mut out = OutputSet::new();
            out.push(format!("stats.{}", ext(args.common.format)), rendered);
            out.push("distribution.csv", distribution);
            finish_with_manifest(out, "stats", started, &cfg, &args.common.corpus, out_dir)
        }
    }
}

fn cmd_drilldown(args: &DrilldownArgs) -> Result<(), CliError> {
    let started = timestamp();
    let cfg = effective_config(&args.common)?;
    cfg.validate().map_err(CliError::from)?;
    let corpus = load(&args.common, &cfg)?;
    let ps = build_profiles(&corpus);
    let alpha = args.alpha.clone().unwrap_or_else(|| cfg.combined_alpha.clone());
    let beta = args.beta.clone().unwrap_or_else(|| cfg.combined_beta.clone());
    let drill = report::field_drilldown_by_id(&ps, &corpus, &args.category, &alpha, &beta, &cfg)
        .map_err(|e| CliError::Validation(e.to_string()))?;
    let mut out = OutputSet::new();
    let stem = sanitize(&args.category);
    out.push(format!("drilldown_{stem}.tsv"), report::drilldown_tsv(&drill, &corpus));
    out.push(format!("drilldown_{stem}.json"), report::drilldown_json(&drill, &corpus));
    finish_with_manifest(out, "drilldown", started, &cfg, &args.common.corpus, &args.out)
}

fn cmd_couple(args: &CoupleArgs) -> Result<(), CliError> {
    let started = timestamp();
    let cfg = effective_config(&args.common)?;
    cfg.validate().map_err(CliError::from)?;
    let corpus = load(&args.common, &cfg)?;
    let category = corpus
        .find_category(&args.category)
        .ok_or_else(|| CliError::Validation(format!("unknown category {:?}", args.category)))?;
    let ps = build_profiles(&corpus);
    let coupling = build_coupling_profiles(&corpus, &cfg)?;
    let cmp = compare_relation_kinds(&corpus, &ps, &coupling, category, &cfg);

    let agreements = cmp.rows.iter().filter(|r| r.agree).count();
    let rate = if cmp.rows.is_empty() {
        1.0
    } else {
        agreements as f64 / cmp.rows.len() as f64
    };
    println!(
        "category {}: agreement rate {:.6} ({agreements} of {} journals); home strongest: direct {}, coupling {}",
        args.category,
        rate,
        cmp.rows.len(),
        cmp.home_strongest_direct,
        cmp.home_strongest_coupling,
    );

    let mut out = OutputSet::new();
    out.push(format!("comparison_{}.tsv", sanitize(&args.category)), comparison_tsv(&cmp, &corpus));
    finish_with_manifest(out, "couple", started, &cfg, &args.common.corpus, &args.out)
}

fn cmd_synth(args: &SynthArgs) -> Result<(), CliError> {
    let spec = SyntheticSpec::from_file(&args.spec)?;
    // Stage through a sibling directory like the report commands, then move
    // the generated files into place.
    let parent = match args.out.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    fs::create_dir_all(&parent)
        .map_err(|e| io_err(&format!("could not create {}", parent.display()), e))?;
    let stage = tempfile::Builder::new()
        .prefix(".jcaudit-stage-")
        .tempdir_in(&parent)
        .map_err(|e| io_err("could not create staging directory", e))?;
    generate(&spec, stage.path())?;
    fs::create_dir_all(&args.out)
        .map_err(|e| io_err(&format!("could not create {}", args.out.display()), e))?;
    let entries = fs::read_dir(stage.path())
        .map_err(|e| io_err("could not list staging directory", e))?;
    for entry in entries {
        let entry = entry.map_err(|e| io_err("could not list staging directory", e))?;
        fs::rename(entry.path(), args.out.join(entry.file_name()))
            .map_err(|e| io_err("could not move generated file into place", e))?;
    }
    Ok(())
}
