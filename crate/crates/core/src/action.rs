//! Rule-based extraction of action schemas from aligned constituency and
//! dependency parses, one clause at a time.
//!
//! Triggers come from two rules: verbs whose constituency path from the root
//! passes only through {IP, VP, VV, VRD}, plus verbs hanging off a rule-one
//! trigger by a conjunct or clausal-complement edge (one hop). Subjects,
//! objects and modifiers are read off the dependency graph, with the 被, 将
//! and 把 constructions treated as overriding exceptions.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::model::{ActionRecord, JddRecord, SourceRef};
use crate::parse::{
    is_adverb_modifier, is_clausal_complement, is_conjunct, is_direct_object, is_nominal_subject,
    is_passive_auxiliary, is_passive_nominal_subject, is_plain_auxiliary, AlignmentError,
    ConstituencyTree, DependencyGraph,
};

/// Constituency labels a root-to-verb path may consist of.
pub const TRIGGER_PATH_LABELS: &[&str] = &["IP", "VP", "VV", "VRD"];

/// How far back subject inheritance may look.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InheritanceWindow {
    /// Same sentence first, then earlier sentences of the same fact class.
    /// The class boundary keeps prosecutor and defendant subjects apart.
    SameFactClass,
    /// Same sentence first, then any earlier sentence of the document.
    Document,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionConfig {
    /// Adverbs dropped from `action_modifier`.
    pub excluded_modifiers: Vec<String>,
    pub inheritance_window: InheritanceWindow,
}

impl Default for ActionConfig {
    fn default() -> Self {
        ActionConfig {
            excluded_modifiers: ["遂", "并", "且", "后", "但"]
                .iter()
                .map(|s| s.to_string())
                .collect(),
            inheritance_window: InheritanceWindow::SameFactClass,
        }
    }
}

/// Trigger extraction over one clause. Rule one walks every leaf's path from
/// the (non-synthetic) root down to its pre-terminal and keeps leaves whose
/// path labels all sit in [`TRIGGER_PATH_LABELS`]; rule two adds verb tokens
/// that are conjunct or clausal-complement dependents of a rule-one trigger,
/// one hop only.
pub fn extract_trigger_verbs(
    tree: &ConstituencyTree,
    graph: &DependencyGraph,
) -> Result<BTreeSet<usize>, AlignmentError> {
    tree.check_alignment(graph)?;
    let mut triggers: BTreeSet<usize> = BTreeSet::new();
    for (index, path) in tree.leaf_paths().iter().enumerate() {
        if path.is_empty() {
            continue;
        }
        if path.iter().all(|label| TRIGGER_PATH_LABELS.contains(label)) {
            triggers.insert(index);
        }
    }
    let rule_one: Vec<usize> = triggers.iter().copied().collect();
    for trigger in rule_one {
        for edge in graph.dependents_matching(trigger, |rel| {
            is_conjunct(rel) || is_clausal_complement(rel)
        }) {
            if graph.tokens[edge.dep].is_verb() {
                triggers.insert(edge.dep);
            }
        }
    }
    Ok(triggers)
}

/// Subject of a trigger: its nominal-subject dependents, else the subject of
/// the most recent earlier clause that has one. `context` holds candidate
/// records most recent first.
pub fn extract_subject(
    trigger: usize,
    graph: &DependencyGraph,
    context: &[&ActionRecord],
) -> (Vec<String>, bool) {
    let mut subjects: Vec<(usize, String)> = graph
        .dependents_matching(trigger, is_nominal_subject)
        .map(|e| (e.dep, graph.phrase_yield(e.dep)))
        .collect();
    if !subjects.is_empty() {
        subjects.sort_by_key(|(dep, _)| *dep);
        return (subjects.into_iter().map(|(_, s)| s).collect(), false);
    }
    for record in context {
        if !record.subject.is_empty() {
            return (record.subject.clone(), true);
        }
    }
    (Vec::new(), true)
}

/// Object of a trigger. Exceptions first: a 被 passive auxiliary redirects
/// to the passive nominal subject; a 将/把 auxiliary takes the nominal
/// dependents between the marker and the trigger. Otherwise the direct
/// objects.
pub fn extract_object(trigger: usize, graph: &DependencyGraph) -> Vec<String> {
    let passive_marker = graph
        .dependents_matching(trigger, is_passive_auxiliary)
        .find(|e| graph.tokens[e.dep].form == "被");
    if passive_marker.is_some() {
        let mut objects: Vec<(usize, String)> = graph
            .dependents_matching(trigger, is_passive_nominal_subject)
            .map(|e| (e.dep, graph.phrase_yield(e.dep)))
            .collect();
        objects.sort_by_key(|(dep, _)| *dep);
        return objects.into_iter().map(|(_, s)| s).collect();
    }
    let disposal_marker = graph
        .dependents_matching(trigger, is_plain_auxiliary)
        .find(|e| matches!(graph.tokens[e.dep].form.as_str(), "把" | "将"));
    if let Some(marker) = disposal_marker {
        let lo = marker.dep.min(trigger);
        let hi = marker.dep.max(trigger);
        let mut objects: Vec<(usize, String)> = graph
            .dependents(trigger)
            .filter(|e| e.dep > lo && e.dep < hi && graph.tokens[e.dep].is_nominal())
            .map(|e| (e.dep, graph.phrase_yield(e.dep)))
            .collect();
        objects.sort_by_key(|(dep, _)| *dep);
        return objects.into_iter().map(|(_, s)| s).collect();
    }
    let mut objects: Vec<(usize, String)> = graph
        .dependents_matching(trigger, is_direct_object)
        .map(|e| (e.dep, graph.phrase_yield(e.dep)))
        .collect();
    objects.sort_by_key(|(dep, _)| *dep);
    objects.into_iter().map(|(_, s)| s).collect()
}

/// Adverb modifiers of a trigger, minus the configured exclusion list.
pub fn extract_modifier(
    trigger: usize,
    graph: &DependencyGraph,
    excluded: &[String],
) -> Vec<String> {
    let mut modifiers: Vec<(usize, String)> = graph
        .dependents_matching(trigger, is_adverb_modifier)
        .filter(|e| {
            let token = &graph.tokens[e.dep];
            !excluded.iter().any(|x| x == &token.form || x == token.lemma_or_form())
        })
        .map(|e| (e.dep, graph.phrase_yield(e.dep)))
        .collect();
    modifiers.sort_by_key(|(dep, _)| *dep);
    modifiers.into_iter().map(|(_, s)| s).collect()
}

/// Runs the full rule set over one clause slice. `context` carries earlier
/// clauses' records (most recent first) for subject inheritance; triggers
/// within the clause share that same context, so inheritance never reaches
/// the current clause or forward.
pub fn extract_douduan_actions(
    tree: &ConstituencyTree,
    graph: &DependencyGraph,
    source: SourceRef,
    context: &[&ActionRecord],
    cfg: &ActionConfig,
) -> Result<Vec<ActionRecord>, AlignmentError> {
    let triggers = extract_trigger_verbs(tree, graph)?;
    let mut records = Vec::with_capacity(triggers.len());
    for trigger in triggers {
        let (subject, inherited) = extract_subject(trigger, graph, context);
        let object = extract_object(trigger, graph);
        let modifier = extract_modifier(trigger, graph, &cfg.excluded_modifiers);
        records.push(ActionRecord {
            subject,
            trigger: graph.tokens[trigger].lemma_or_form().to_string(),
            object,
            action_modifier: modifier,
            source,
            subject_inherited: inherited,
        });
    }
    Ok(records)
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PruneReport {
    /// Lemmas removed because they occurred exactly once corpus-wide.
    pub removed_lemmas: Vec<String>,
    pub removed_records: usize,
}

/// Removes every action whose trigger lemma occurs exactly once across the
/// corpus. A corpus-level barrier: per-document extraction must be complete.
pub fn prune_hapax_triggers(corpus: &mut [JddRecord]) -> PruneReport {
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for record in corpus.iter() {
        for action in &record.actions {
            *counts.entry(action.trigger.clone()).or_insert(0) += 1;
        }
    }
    let hapax: BTreeSet<String> = counts
        .into_iter()
        .filter(|(_, n)| *n == 1)
        .map(|(lemma, _)| lemma)
        .collect();
    let mut removed_records = 0;
    for record in corpus.iter_mut() {
        let before = record.actions.len();
        record.actions.retain(|a| !hapax.contains(&a.trigger));
        removed_records += before - record.actions.len();
    }
    PruneReport {
        removed_lemmas: hapax.into_iter().collect(),
        removed_records,
    }
}
