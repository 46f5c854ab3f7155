//! Ingest and build orchestration behind the CLI: corpus + parse files in,
//! extracted records out; records in, pruned knowledge base out.

use std::collections::BTreeMap;
use std::path::Path;

use jdd_core::action::{prune_hapax_triggers, PruneReport};
use jdd_core::config::EngineConfig;
use jdd_core::extract::{extract_record, ParseSet, SentenceParse};
use jdd_core::kb::{build_matrix, BuildReport, KnowledgeBase};
use jdd_core::model::JddRecord;
use jdd_core::Diagnostic;
use thiserror::Error;

use crate::brackets;
use crate::conllu;
use crate::corpus;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("{0}")]
    Corpus(#[from] corpus::CorpusError),
    #[error("cannot read parse directory {0}: {1}")]
    ParseDir(String, std::io::Error),
    #[error("cannot read {0}: {1}")]
    ParseFile(String, std::io::Error),
    #[error("configuration: {0}")]
    Extract(#[from] jdd_core::extract::ExtractError),
}

/// Loads every `.conllu` and `.trees` file under a directory (sorted order)
/// and joins them into per-document parse sets. Sentences with only one of
/// the two annotations are reported and dropped.
pub fn load_parse_dir(
    dir: &Path,
    diags: &mut Vec<Diagnostic>,
) -> Result<BTreeMap<String, ParseSet>, PipelineError> {
    let mut conllu_files = Vec::new();
    let mut tree_files = Vec::new();
    let entries = std::fs::read_dir(dir)
        .map_err(|e| PipelineError::ParseDir(dir.display().to_string(), e))?;
    for entry in entries {
        let entry = entry.map_err(|e| PipelineError::ParseDir(dir.display().to_string(), e))?;
        let path = entry.path();
        match path.extension().and_then(|e| e.to_str()) {
            Some("conllu") => conllu_files.push(path),
            Some("trees") => tree_files.push(path),
            _ => {}
        }
    }
    conllu_files.sort();
    tree_files.sort();

    let mut graphs: BTreeMap<(String, usize), jdd_core::parse::DependencyGraph> = BTreeMap::new();
    for path in &conllu_files {
        let file = std::fs::File::open(path)
            .map_err(|e| PipelineError::ParseFile(path.display().to_string(), e))?;
        let sentences = conllu::read_conllu(std::io::BufReader::new(file), diags)
            .map_err(|e| match e {
                conllu::ConlluError::Io(e) => {
                    PipelineError::ParseFile(path.display().to_string(), e)
                }
            })?;
        for s in sentences {
            graphs.insert((s.doc_id, s.sent_id), s.graph);
        }
    }
    let mut trees: BTreeMap<(String, usize), jdd_core::parse::ConstituencyTree> = BTreeMap::new();
    for path in &tree_files {
        let file = std::fs::File::open(path)
            .map_err(|e| PipelineError::ParseFile(path.display().to_string(), e))?;
        let sentences = brackets::read_trees(std::io::BufReader::new(file), diags)
            .map_err(|e| match e {
                brackets::BracketIoError::Io(e) => {
                    PipelineError::ParseFile(path.display().to_string(), e)
                }
            })?;
        for s in sentences {
            trees.insert((s.doc_id, s.sent_id), s.tree);
        }
    }

    let mut out: BTreeMap<String, ParseSet> = BTreeMap::new();
    for ((doc, sent), graph) in graphs {
        match trees.remove(&(doc.clone(), sent)) {
            Some(tree) => {
                out.entry(doc)
                    .or_default()
                    .insert(sent, SentenceParse { graph, tree });
            }
            None => diags.push(Diagnostic::new(
                doc.clone(),
                format!("sentence {sent} has a dependency parse but no constituency tree"),
            )),
        }
    }
    for (doc, sent) in trees.keys() {
        diags.push(Diagnostic::new(
            doc.clone(),
            format!("sentence {sent} has a constituency tree but no dependency parse"),
        ));
    }
    Ok(out)
}

pub struct IngestOutcome {
    pub records: Vec<JddRecord>,
    pub diagnostics: Vec<Diagnostic>,
}

/// Extracts a loaded corpus against its parse sets. `jobs` bounds the
/// worker threads; output order and diagnostics order follow record order
/// regardless of scheduling.
pub fn run_ingest(
    skeletons: Vec<JddRecord>,
    parse_sets: &BTreeMap<String, ParseSet>,
    config: &EngineConfig,
    jobs: usize,
) -> Result<IngestOutcome, PipelineError> {
    let jobs = jobs.max(1);
    let empty = ParseSet::new();
    let extract_one = |record: JddRecord| -> Result<(JddRecord, Vec<Diagnostic>), PipelineError> {
        let mut diags = Vec::new();
        let parses = parse_sets.get(&record.case_id).unwrap_or(&empty);
        let out = extract_record(record, parses, config, &mut diags)?;
        Ok((out, diags))
    };

    let mut results: Vec<Result<(JddRecord, Vec<Diagnostic>), PipelineError>> =
        Vec::with_capacity(skeletons.len());
    if jobs == 1 || skeletons.len() <= 1 {
        for record in skeletons {
            results.push(extract_one(record));
        }
    } else {
        let chunk_size = skeletons.len().div_ceil(jobs);
        let chunks: Vec<Vec<JddRecord>> = skeletons
            .chunks(chunk_size)
            .map(|c| c.to_vec())
            .collect();
        let mut chunk_results: Vec<Vec<Result<(JddRecord, Vec<Diagnostic>), PipelineError>>> =
            Vec::new();
        let extract_ref = &extract_one;
        std::thread::scope(|scope| {
            let handles: Vec<_> = chunks
                .into_iter()
                .map(|chunk| {
                    scope.spawn(move || chunk.into_iter().map(extract_ref).collect::<Vec<_>>())
                })
                .collect();
            for handle in handles {
                chunk_results.push(handle.join().expect("extraction worker panicked"));
            }
        });
        results = chunk_results.into_iter().flatten().collect();
    }

    let mut records = Vec::with_capacity(results.len());
    let mut diagnostics = Vec::new();
    for result in results {
        let (record, mut diags) = result?;
        diagnostics.append(&mut diags);
        records.push(record);
    }
    Ok(IngestOutcome {
        records,
        diagnostics,
    })
}

pub struct BuildOutcome {
    pub kb: KnowledgeBase,
    pub prune: PruneReport,
    pub report: BuildReport,
    pub diagnostics: Vec<Diagnostic>,
}

/// Applies corpus-level hapax pruning, then builds all partitions and the
/// index map.
pub fn run_build(mut records: Vec<JddRecord>, config: &EngineConfig) -> BuildOutcome {
    let prune = prune_hapax_triggers(&mut records);
    let mut diagnostics = Vec::new();
    let (kb, report) = build_matrix(&records, config, &mut diagnostics);
    BuildOutcome {
        kb,
        prune,
        report,
        diagnostics,
    }
}
