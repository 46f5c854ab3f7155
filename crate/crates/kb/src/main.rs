//! Command-line front end: ingest → build → query over judgment-document
//! corpora, plus a seeded synthetic-corpus generator for testing.
//!
//! Exit codes: 0 success (warnings allowed), 1 usage error, 2 data error,
//! 3 I/O error. Diagnostics go to stderr; data goes to files and stdout.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use jdd_core::config::EngineConfig;
use jdd_core::kb::{CellQuery, KnowledgeBase};
use jdd_core::query::{
    get_marginals, question1_pipeline, question2a_pipeline, question2b_pipeline, Conditioner,
    CoordComponent, CountMode, GroupSplitter, MarginalSpec,
};
use jdd_core::scale::DamageCoord;
use jdd_core::Diagnostic;

use jdd_kb::config_file::{
    self, load_engine_config, load_query_spec, query_spec_from_section, QueryKind, QuerySpec,
    SplitterKind,
};
use jdd_kb::kvconf::Section;
use jdd_kb::{brackets, conllu, corpus, export, pipeline, snapshot, synth};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
enum LogLevel {
    Error,
    Warn,
    Info,
    Debug,
}

#[derive(Parser)]
#[command(
    name = "jdd-kb",
    about = "Landscape knowledge base over Chinese criminal judgment documents"
)]
struct Cli {
    /// Diagnostic verbosity on stderr.
    #[arg(long, global = true, value_enum, default_value_t = LogLevel::Warn)]
    log_level: LogLevel,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Extract features from a corpus plus its parse annotations.
    Ingest {
        /// Skeleton corpus (JSON-lines with schema header).
        #[arg(long)]
        corpus: PathBuf,
        /// Directory of .conllu and .trees annotation files.
        #[arg(long)]
        parses: PathBuf,
        /// Engine config file; defaults apply when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Output records file.
        #[arg(long)]
        out: PathBuf,
        /// Worker threads for per-document extraction.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Prune hapax triggers, build all partitions and save a snapshot.
    Build {
        /// Extracted records file.
        #[arg(long)]
        records: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
        /// Output snapshot path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Evaluate a pipeline or primitive against a snapshot.
    Query {
        /// Knowledge-base snapshot.
        #[arg(long)]
        kb: PathBuf,
        /// Query spec file; CLI flags below are the inline equivalent.
        #[arg(long)]
        spec: Option<PathBuf>,
        #[arg(long)]
        pipeline: Option<String>,
        #[arg(long)]
        partition: Option<String>,
        #[arg(long)]
        splitter: Option<String>,
        #[arg(long)]
        axis: Option<String>,
        /// Coordinate fixing `axis=coordinate`; repeatable.
        #[arg(long)]
        fixing: Vec<String>,
        #[arg(long)]
        action: Option<String>,
        #[arg(long)]
        damage: Option<String>,
        #[arg(long)]
        punishment: Option<String>,
        #[arg(long)]
        fine_bucket: Option<String>,
        /// Schema path for the resolve pipeline.
        #[arg(long)]
        path: Option<String>,
        #[arg(long)]
        k: Option<String>,
        #[arg(long)]
        filter_fraction: Option<String>,
        #[arg(long)]
        count: Option<String>,
        /// Extracted records file, needed by question1/question2a.
        #[arg(long)]
        records: Option<PathBuf>,
        #[arg(long)]
        config: Option<PathBuf>,
        /// Output directory for result files.
        #[arg(long)]
        out: PathBuf,
    },
    /// Generate a seeded synthetic corpus with ground truth.
    Synth {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        size: usize,
        #[arg(long)]
        config: Option<PathBuf>,
        /// Output directory (corpus.jsonl, parses/, ground_truth.jsonl).
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Data(String),
    Io(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Io(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Data(m) | CliError::Io(m) => m,
        }
    }
}

impl From<config_file::ConfigError> for CliError {
    fn from(e: config_file::ConfigError) -> Self {
        match e {
            config_file::ConfigError::Io(_, _) => CliError::Io(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<corpus::CorpusError> for CliError {
    fn from(e: corpus::CorpusError) -> Self {
        match e {
            corpus::CorpusError::Open(_, _) | corpus::CorpusError::Io(_) => {
                CliError::Io(e.to_string())
            }
            _ => CliError::Data(e.to_string()),
        }
    }
}

impl From<snapshot::SnapshotError> for CliError {
    fn from(e: snapshot::SnapshotError) -> Self {
        match e {
            snapshot::SnapshotError::Io(_, _) => CliError::Io(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}

impl From<pipeline::PipelineError> for CliError {
    fn from(e: pipeline::PipelineError) -> Self {
        match e {
            pipeline::PipelineError::Corpus(inner) => inner.into(),
            pipeline::PipelineError::ParseDir(_, _)
            | pipeline::PipelineError::ParseFile(_, _) => CliError::Io(e.to_string()),
            pipeline::PipelineError::Extract(_) => CliError::Usage(e.to_string()),
        }
    }
}

impl From<jdd_core::query::QueryError> for CliError {
    fn from(e: jdd_core::query::QueryError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<export::ExportError> for CliError {
    fn from(e: export::ExportError) -> Self {
        CliError::Io(e.to_string())
    }
}

struct Logger {
    level: LogLevel,
}

impl Logger {
    fn warn(&self, message: &str) {
        if self.level >= LogLevel::Warn {
            eprintln!("warn: {message}");
        }
    }

    fn info(&self, message: &str) {
        if self.level >= LogLevel::Info {
            eprintln!("info: {message}");
        }
    }

    fn diagnostics(&self, diags: &[Diagnostic]) {
        for d in diags {
            self.warn(&d.to_string());
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap prints help/version through the error itself.
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    ExitCode::SUCCESS
                }
                _ => ExitCode::from(1),
            };
        }
    };
    let logger = Logger {
        level: cli.log_level,
    };
    match run(cli.command, &logger) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

fn load_config(path: &Option<PathBuf>) -> Result<EngineConfig, CliError> {
    match path {
        Some(path) => Ok(load_engine_config(path)?),
        None => Ok(EngineConfig::default()),
    }
}

fn run(command: Command, logger: &Logger) -> Result<(), CliError> {
    match command {
        Command::Ingest {
            corpus: corpus_path,
            parses,
            config,
            out,
            jobs,
        } => {
            let config = load_config(&config)?;
            let (skeletons, line_diags) = corpus::load_corpus(&corpus_path)?;
            logger.diagnostics(&line_diags);
            let mut parse_diags = Vec::new();
            let parse_sets = pipeline::load_parse_dir(&parses, &mut parse_diags)?;
            logger.diagnostics(&parse_diags);
            let outcome = pipeline::run_ingest(skeletons, &parse_sets, &config, jobs)?;
            logger.diagnostics(&outcome.diagnostics);
            corpus::write_corpus(&out, &outcome.records)?;
            logger.info(&format!(
                "ingested {} records ({} diagnostics)",
                outcome.records.len(),
                line_diags.len() + parse_diags.len() + outcome.diagnostics.len()
            ));
            Ok(())
        }
        Command::Build {
            records,
            config,
            out,
        } => {
            let config = load_config(&config)?;
            let (records, line_diags) = corpus::load_corpus(&records)?;
            logger.diagnostics(&line_diags);
            if records.is_empty() {
                logger.warn("records file contains no records; building an empty knowledge base");
            }
            let outcome = pipeline::run_build(records, &config);
            logger.diagnostics(&outcome.diagnostics);
            if !outcome.prune.removed_lemmas.is_empty() {
                logger.info(&format!(
                    "pruned {} hapax trigger lemmas ({} action records)",
                    outcome.prune.removed_lemmas.len(),
                    outcome.prune.removed_records
                ));
            }
            snapshot::save_kb(&outcome.kb, &out)?;
            print_build_summary(&outcome.kb, &outcome.report);
            Ok(())
        }
        Command::Query {
            kb,
            spec,
            pipeline,
            partition,
            splitter,
            axis,
            fixing,
            action,
            damage,
            punishment,
            fine_bucket,
            path,
            k,
            filter_fraction,
            count,
            records,
            config,
            out,
        } => {
            let kb = snapshot::load_kb(&kb)?;
            let spec = match spec {
                Some(path) => load_query_spec(&path)?,
                None => {
                    let mut entries: Vec<(String, String)> = Vec::new();
                    let mut push = |key: &str, value: Option<String>| {
                        if let Some(value) = value {
                            entries.push((key.to_string(), value));
                        }
                    };
                    push("pipeline", pipeline);
                    push("partition", partition);
                    push("splitter", splitter);
                    push("axis", axis);
                    push("action", action);
                    push("damage", damage);
                    push("punishment", punishment);
                    push("fine_bucket", fine_bucket);
                    push("path", path);
                    push("k", k);
                    push("filter_fraction", filter_fraction);
                    push("count", count);
                    for value in fixing {
                        entries.push(("fixing".to_string(), value));
                    }
                    let section = Section {
                        name: "query".to_string(),
                        entries,
                    };
                    query_spec_from_section(&section)?
                }
            };
            let config = load_config(&config)?;
            std::fs::create_dir_all(&out)
                .map_err(|e| CliError::Io(format!("cannot create {}: {e}", out.display())))?;
            run_query(&kb, spec, records, &config, &out, logger)
        }
        Command::Synth {
            seed,
            size,
            config,
            out,
        } => {
            // The engine config is accepted for interface parity and
            // validated, but generation itself uses built-in pools.
            let _ = load_config(&config)?;
            let output = synth::generate(seed, size);
            std::fs::create_dir_all(out.join("parses"))
                .map_err(|e| CliError::Io(format!("cannot create {}: {e}", out.display())))?;
            corpus::write_corpus(&out.join("corpus.jsonl"), &output.records)?;
            let conllu_sentences: Vec<(String, usize, &jdd_core::parse::DependencyGraph)> = output
                .parses
                .iter()
                .map(|(doc, sent, parse)| (doc.clone(), *sent, &parse.graph))
                .collect();
            let conllu_path = out.join("parses/synth.conllu");
            let file = std::fs::File::create(&conllu_path)
                .map_err(|e| CliError::Io(format!("cannot write {}: {e}", conllu_path.display())))?;
            conllu::write_conllu(std::io::BufWriter::new(file), &conllu_sentences)
                .map_err(|e| CliError::Io(e.to_string()))?;
            let tree_sentences: Vec<(String, usize, &jdd_core::parse::ConstituencyTree)> = output
                .parses
                .iter()
                .map(|(doc, sent, parse)| (doc.clone(), *sent, &parse.tree))
                .collect();
            let trees_path = out.join("parses/synth.trees");
            let file = std::fs::File::create(&trees_path)
                .map_err(|e| CliError::Io(format!("cannot write {}: {e}", trees_path.display())))?;
            brackets::write_trees(std::io::BufWriter::new(file), &tree_sentences)
                .map_err(|e| CliError::Io(e.to_string()))?;
            let truth_path = out.join("ground_truth.jsonl");
            let mut lines = String::new();
            for case in &output.ground_truth {
                lines.push_str(&serde_json::to_string(case).map_err(|e| {
                    CliError::Data(format!("ground truth serialization: {e}"))
                })?);
                lines.push('\n');
            }
            std::fs::write(&truth_path, lines)
                .map_err(|e| CliError::Io(format!("cannot write {}: {e}", truth_path.display())))?;
            logger.info(&format!("generated {size} cases under {}", out.display()));
            Ok(())
        }
    }
}

fn print_build_summary(kb: &KnowledgeBase, report: &jdd_core::kb::BuildReport) {
    println!(
        "partitions={} records_indexed={} tuples={} skipped_invalid={} skipped_duplicates={} without_conviction={}",
        kb.partitions.len(),
        report.records_indexed,
        report.tuples_indexed,
        report.constraint_violating_records,
        report.duplicate_case_ids,
        report.records_without_conviction
    );
    for (crime, matrix) in &kb.partitions {
        println!(
            "partition {crime}: actions={} damage_coords={} punishment_levels={} tuples={}",
            matrix.action_vocab().count(),
            1 + jdd_core::model::InjuryLevel::ALL.len() as u32
                + kb.scale.damage_axis.num_money_buckets(crime),
            kb.scale.scale.num_levels(),
            matrix.total_tuples()
        );
    }
}

fn load_records_for(
    records: Option<PathBuf>,
    spec: &QuerySpec,
    logger: &Logger,
) -> Result<Option<Vec<jdd_core::model::JddRecord>>, CliError> {
    let path = records.or_else(|| spec.records.as_ref().map(PathBuf::from));
    match path {
        Some(path) => {
            let (records, diags) = corpus::load_corpus(&path)?;
            logger.diagnostics(&diags);
            Ok(Some(records))
        }
        None => Ok(None),
    }
}

fn run_query(
    kb: &KnowledgeBase,
    spec: QuerySpec,
    records: Option<PathBuf>,
    config: &EngineConfig,
    out: &Path,
    logger: &Logger,
) -> Result<(), CliError> {
    // Echo the resolved query for reproducibility.
    println!(
        "{}",
        serde_json::to_string(&spec_echo(&spec)).expect("echo serialization")
    );
    let k = spec.k.unwrap_or(config.query.top_k);
    let filter_fraction = spec.filter_fraction.unwrap_or(config.query.filter_fraction);
    match &spec.kind {
        QueryKind::Question1 { splitter } => {
            let records = load_records_for(records, &spec, logger)?.ok_or_else(|| {
                CliError::Usage("question1 needs --records (or records= in the spec)".to_string())
            })?;
            let splitter = match splitter {
                SplitterKind::DefenseArgument => GroupSplitter::DefenseArgument,
                SplitterKind::Forgiveness => GroupSplitter::Forgiveness {
                    terms: config.query.forgiveness_terms.clone(),
                    negations: config.query.negation_lexicon.clone(),
                },
            };
            let mut diags = Vec::new();
            let result = question1_pipeline(
                kb,
                &records,
                &spec.partition,
                &splitter,
                Conditioner::Both,
                &mut diags,
            )?;
            logger.diagnostics(&diags);
            export::write_json(&result, &out.join("q1_densities.json"))?;
            for group in &result.groups {
                let per_damage_path = out.join(format!("q1_{}_per_damage.csv", group.name));
                let mut text = String::from("damage,punishment,density\n");
                for (damage, h) in &group.per_damage {
                    for (coord, value) in &h.entries {
                        if let Some(CoordComponent::Punishment(slot)) = coord.first() {
                            text.push_str(&format!(
                                "{},{},{value:.9}\n",
                                damage.label(&spec.partition, &kb.scale.damage_axis),
                                slot.label(&kb.scale.scale)
                            ));
                        }
                    }
                }
                std::fs::write(&per_damage_path, text).map_err(|e| {
                    CliError::Io(format!("cannot write {}: {e}", per_damage_path.display()))
                })?;
                if let Some(pooled) = &group.pooled {
                    let path = out.join(format!("q1_{}_pooled.csv", group.name));
                    export::write_histogram_csv(pooled, kb, &spec.partition, &path)?;
                }
            }
            Ok(())
        }
        QueryKind::Question2a => {
            let records = load_records_for(records, &spec, logger)?.unwrap_or_else(|| {
                logger.warn(
                    "question2a without --records: off-unit durations cannot be reported",
                );
                Vec::new()
            });
            let result = question2a_pipeline(kb, &records, &spec.partition)?;
            if result.no_rare_tail {
                logger.info("no rare tail: the punishment histogram has no elbow");
            }
            export::write_histogram_csv(
                &result.histogram,
                kb,
                &spec.partition,
                &out.join("q2a_histogram.csv"),
            )?;
            export::write_json(&result, &out.join("q2a_report.json"))?;
            Ok(())
        }
        QueryKind::Question2b => {
            let result = question2b_pipeline(kb, &spec.partition, k, filter_fraction)?;
            let mut scores = String::from("action,score,subset_freq,partition_freq\n");
            for s in &result.scores {
                scores.push_str(&format!(
                    "{},{:.9},{},{}\n",
                    s.action, s.score, s.subset_freq, s.partition_freq
                ));
            }
            let scores_path = out.join("q2b_scores.csv");
            std::fs::write(&scores_path, scores)
                .map_err(|e| CliError::Io(format!("cannot write {}: {e}", scores_path.display())))?;
            export::write_heatmap_csv(&result.heatmap, &out.join("q2b_heatmap.csv"))?;
            export::write_json(&result, &out.join("q2b_report.json"))?;
            Ok(())
        }
        QueryKind::Marginals {
            over,
            fixing,
            distinct,
        } => {
            let mut resolved_fixing = Vec::new();
            for (axis, label) in fixing {
                let component = parse_coord(*axis, label, kb, &spec.partition)?;
                resolved_fixing.push((*axis, component));
            }
            let marginal_spec = MarginalSpec {
                over: over.clone(),
                fixing: resolved_fixing,
                mode: if *distinct {
                    CountMode::DistinctCases
                } else {
                    CountMode::Tuples
                },
            };
            let h = get_marginals(kb, &spec.partition, &marginal_spec)?;
            export::write_histogram_csv(&h, kb, &spec.partition, &out.join("marginal.csv"))?;
            Ok(())
        }
        QueryKind::GetCases {
            action,
            damage,
            punishment,
        } => {
            let punishment = match punishment {
                Some(spec_coord) => Some(spec_coord.resolve(&kb.scale.scale).ok_or_else(|| {
                    CliError::Usage("bad punishment coordinate".to_string())
                })?),
                None => None,
            };
            let query = CellQuery {
                partition: spec.partition.clone(),
                action: action.clone(),
                damage: *damage,
                punishment,
            };
            let mut diags = Vec::new();
            let cases = kb.get_cases(&query, &mut diags);
            logger.diagnostics(&diags);
            if !diags.is_empty() {
                return Err(CliError::Data(
                    diags
                        .iter()
                        .map(|d| d.message.clone())
                        .collect::<Vec<_>>()
                        .join("; "),
                ));
            }
            let mut text = String::new();
            for case in &cases {
                println!("{case}");
                text.push_str(case);
                text.push('\n');
            }
            let path = out.join("cases.txt");
            std::fs::write(&path, text)
                .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
            Ok(())
        }
        QueryKind::ResolvePath { path } => {
            let target = kb
                .resolve_forward(path)
                .map_err(|e| CliError::Data(e.to_string()))?;
            println!(
                "{}",
                serde_json::to_string(&target).expect("target serialization")
            );
            export::write_json(&target, &out.join("resolved.json"))?;
            Ok(())
        }
    }
}

fn parse_coord(
    axis: jdd_core::kb::AxisId,
    label: &str,
    kb: &KnowledgeBase,
    partition: &str,
) -> Result<CoordComponent, CliError> {
    use jdd_core::kb::AxisId;
    match axis {
        AxisId::Action => Ok(CoordComponent::Action(label.to_string())),
        AxisId::Damage => DamageCoord::parse_label(label)
            .map(CoordComponent::Damage)
            .ok_or_else(|| CliError::Usage(format!("bad damage coordinate {label:?}"))),
        AxisId::Punishment => {
            let slot = match label {
                "fine_only" => jdd_core::scale::PunishSlot::FineOnly,
                "unspecified" => jdd_core::scale::PunishSlot::Unspecified,
                other => kb
                    .scale
                    .scale
                    .parse_level_label(other)
                    .map(jdd_core::scale::PunishSlot::Level)
                    .ok_or_else(|| {
                        CliError::Usage(format!(
                            "bad punishment coordinate {label:?} for partition {partition:?}"
                        ))
                    })?,
            };
            Ok(CoordComponent::Punishment(slot))
        }
    }
}

#[derive(serde::Serialize)]
struct SpecEcho<'a> {
    partition: &'a str,
    pipeline: String,
    k: Option<usize>,
    filter_fraction: Option<f64>,
    records: Option<&'a str>,
}

fn spec_echo(spec: &QuerySpec) -> SpecEcho<'_> {
    let pipeline = match &spec.kind {
        QueryKind::Question1 { splitter } => format!(
            "question1/{}",
            match splitter {
                SplitterKind::DefenseArgument => "defense_argument",
                SplitterKind::Forgiveness => "forgiveness",
            }
        ),
        QueryKind::Question2a => "question2a".to_string(),
        QueryKind::Question2b => "question2b".to_string(),
        QueryKind::Marginals { over, .. } => format!(
            "marginals/{}",
            over.iter().map(|a| a.name()).collect::<Vec<_>>().join("+")
        ),
        QueryKind::GetCases { .. } => "get_cases".to_string(),
        QueryKind::ResolvePath { path } => format!("resolve/{path}"),
    };
    SpecEcho {
        partition: &spec.partition,
        pipeline,
        k: spec.k,
        filter_fraction: spec.filter_fraction,
        records: spec.records.as_deref(),
    }
}
