//! Record-level extraction: classify the fact sentences, slice the supplied
//! parses per clause, run the action rules with subject inheritance, and
//! extract damages, charges and punishments.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use alloc::format;

use crate::action::{extract_douduan_actions, InheritanceWindow};
use crate::config::EngineConfig;
use crate::entity::{
    extract_charges, extract_convictions_and_punishments, extract_injury_level,
    extract_monetary_damage,
};
use crate::ingest::classify_sentences;
use crate::model::{ActionRecord, DamageValue, FactClass, JddRecord, SourceRef};
use crate::parse::{douduan_token_spans, ConstituencyTree, DependencyGraph};
use crate::Diagnostic;

/// The pre-parsed annotations of one fact sentence.
#[derive(Debug, Clone, PartialEq)]
pub struct SentenceParse {
    pub graph: DependencyGraph,
    pub tree: ConstituencyTree,
}

/// All parses of one document, keyed by fact-sentence index.
pub type ParseSet = BTreeMap<usize, SentenceParse>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExtractError {
    #[error("cue table: {0}")]
    CueTable(#[from] crate::ingest::CueTableError),
}

/// Runs the full per-record extraction over a skeleton record. Sentences
/// are re-classified from their text; parses are attached and sliced per
/// clause for action extraction; damages, charges and punishment vectors
/// are filled in. Returns the populated record; problems surface as
/// diagnostics, not errors.
pub fn extract_record(
    mut record: JddRecord,
    parses: &ParseSet,
    config: &EngineConfig,
    diags: &mut Vec<Diagnostic>,
) -> Result<JddRecord, ExtractError> {
    let case_id = record.case_id.clone();
    let texts: Vec<String> = record
        .fact_sentences
        .iter()
        .map(|s| s.text.clone())
        .collect();
    record.fact_sentences = classify_sentences(&texts, &config.cues)?;
    for (index, sentence) in record.fact_sentences.iter_mut().enumerate() {
        if let Some(parse) = parses.get(&index) {
            sentence.dependency_parse = Some(parse.graph.clone());
            sentence.constituency_parse = Some(parse.tree.clone());
        }
    }

    record.actions = extract_actions(&record, parses, config, &case_id, diags);
    record.damages = extract_damages(&record, config, &case_id, diags);
    record.charges = extract_charges(&record, &config.crimes, diags);
    record.punishments = extract_convictions_and_punishments(
        &record,
        &config.punishments,
        &config.crimes,
        &config.constraints,
        diags,
    );
    if record.crime_type.is_empty() {
        record.crime_type = record
            .punishments
            .first()
            .map(|(crime, _)| crime.clone())
            .or_else(|| record.charges.first().map(|c| c.standard_name.clone()))
            .unwrap_or_else(|| "unknown".to_string());
    }
    record.check_invariants(diags);
    Ok(record)
}

fn extract_actions(
    record: &JddRecord,
    parses: &ParseSet,
    config: &EngineConfig,
    case_id: &str,
    diags: &mut Vec<Diagnostic>,
) -> Vec<ActionRecord> {
    let mut actions: Vec<ActionRecord> = Vec::new();
    for (sentence_index, sentence) in record.fact_sentences.iter().enumerate() {
        let Some(parse) = parses.get(&sentence_index) else {
            continue;
        };
        if let Err(e) = parse.tree.check_alignment(&parse.graph) {
            diags.push(Diagnostic::new(
                case_id.to_string(),
                format!("sentence {sentence_index}: {e}; actions skipped"),
            ));
            continue;
        }
        let spans = douduan_token_spans(&sentence.douduan, &parse.graph.tokens);
        for (douduan_index, span) in spans.into_iter().enumerate() {
            if span.is_empty() {
                continue;
            }
            let graph_slice = parse.graph.slice(span.clone());
            let tree_slice = parse.tree.slice(span);
            let source = SourceRef {
                sentence: sentence_index,
                douduan: douduan_index,
            };
            // Inheritance context: earlier clauses of this sentence first
            // (nearest first), then earlier sentences per the window policy.
            let mut context: Vec<&ActionRecord> = Vec::new();
            for prior in actions.iter().rev() {
                let eligible = if prior.source.sentence == sentence_index {
                    prior.source.douduan < douduan_index
                } else {
                    match config.action.inheritance_window {
                        InheritanceWindow::Document => true,
                        InheritanceWindow::SameFactClass => {
                            record
                                .fact_sentences
                                .get(prior.source.sentence)
                                .map(|s| s.fact_class)
                                == Some(sentence.fact_class)
                        }
                    }
                };
                if eligible {
                    context.push(prior);
                }
            }
            match extract_douduan_actions(
                &tree_slice,
                &graph_slice,
                source,
                &context,
                &config.action,
            ) {
                Ok(mut found) => actions.append(&mut found),
                Err(e) => diags.push(Diagnostic::new(
                    case_id.to_string(),
                    format!("sentence {sentence_index} clause {douduan_index}: {e}"),
                )),
            }
        }
    }
    actions
}

fn extract_damages(
    record: &JddRecord,
    config: &EngineConfig,
    case_id: &str,
    diags: &mut Vec<Diagnostic>,
) -> Vec<DamageValue> {
    let scan = |classes: &[FactClass], diags: &mut Vec<Diagnostic>| -> Vec<DamageValue> {
        let mut out = Vec::new();
        for sentence in &record.fact_sentences {
            if !classes.contains(&sentence.fact_class) {
                continue;
            }
            for douduan in &sentence.douduan {
                if let Some(money) =
                    extract_monetary_damage(douduan, &config.damage_scan.cues, case_id, diags)
                {
                    out.push(money);
                }
                if let Some(injury) = extract_injury_level(douduan, &config.injury) {
                    out.push(injury);
                }
            }
        }
        out
    };
    let has_primary = record
        .fact_sentences
        .iter()
        .any(|s| config.damage_scan.classes.contains(&s.fact_class));
    if has_primary {
        scan(&config.damage_scan.classes, diags)
    } else {
        scan(&config.damage_scan.fallback_classes, diags)
    }
}
