//! The knowledge base: per-crime sparse distribution matrices over
//! action × damage × punishment-bucket coordinates, with the forward index
//! (schema path → matrix coordinate) and the reverse index (cell → case
//! postings) that connect records to cells.
//!
//! Cells are keyed by coordinate values rather than positional ids, which
//! makes building associative and commutative: merging the matrices of two
//! disjoint sub-corpora equals building over their union.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use alloc::format;

use serde::{Deserialize, Serialize};

use crate::config::EngineConfig;
use crate::model::{record_to_feature_set, JddRecord};
use crate::scale::{DamageCoord, PunishCellCoord, PunishSlot, ScaleConfig};
use crate::Diagnostic;

pub use crate::scale::bucket_punishment;

/// Main-store cell coordinate.
pub type MainKey = (String, DamageCoord, PunishSlot);
/// Parallel fine-store cell coordinate.
pub type FineKey = (String, DamageCoord, u32);

/// One cell: the tuple count and a posting list holding one case-id entry
/// per contributing tuple occurrence. Postings are kept sorted; queries
/// deduplicate on output.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cell {
    pub count: u64,
    pub postings: Vec<String>,
}

impl Cell {
    fn push(&mut self, case_id: &str) {
        self.count += 1;
        self.postings.push(case_id.to_string());
    }

    fn normalize(&mut self) {
        self.postings.sort_unstable();
    }

    fn merge(&mut self, other: &Cell) {
        self.count += other.count;
        self.postings.extend(other.postings.iter().cloned());
        self.normalize();
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct MatrixRepr {
    crime_type: String,
    cells: Vec<(MainKey, Cell)>,
    fine_cells: Vec<(FineKey, Cell)>,
    total_tuples: u64,
}

/// One crime-type partition of the matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "MatrixRepr", into = "MatrixRepr")]
pub struct DistributionMatrix {
    pub crime_type: String,
    cells: BTreeMap<MainKey, Cell>,
    fine_cells: BTreeMap<FineKey, Cell>,
    /// The open action axis: trigger lemmas observed in this partition, in
    /// sorted order. Damage and punishment axes are closed by config.
    action_vocab: BTreeSet<String>,
    total_tuples: u64,
}

impl From<DistributionMatrix> for MatrixRepr {
    fn from(m: DistributionMatrix) -> Self {
        MatrixRepr {
            crime_type: m.crime_type,
            cells: m.cells.into_iter().collect(),
            fine_cells: m.fine_cells.into_iter().collect(),
            total_tuples: m.total_tuples,
        }
    }
}

impl TryFrom<MatrixRepr> for DistributionMatrix {
    type Error = String;

    fn try_from(repr: MatrixRepr) -> Result<Self, String> {
        let mut m = DistributionMatrix::new(&repr.crime_type);
        for (key, cell) in repr.cells {
            if cell.count != cell.postings.len() as u64 {
                return Err(format!(
                    "cell {key:?}: count {} does not match {} postings",
                    cell.count,
                    cell.postings.len()
                ));
            }
            m.action_vocab.insert(key.0.clone());
            if m.cells.insert(key.clone(), cell).is_some() {
                return Err(format!("duplicate cell {key:?}"));
            }
        }
        for (key, cell) in repr.fine_cells {
            m.action_vocab.insert(key.0.clone());
            if m.fine_cells.insert(key.clone(), cell).is_some() {
                return Err(format!("duplicate fine cell {key:?}"));
            }
        }
        m.total_tuples = repr.total_tuples;
        Ok(m)
    }
}

impl DistributionMatrix {
    pub fn new(crime_type: &str) -> Self {
        DistributionMatrix {
            crime_type: crime_type.to_string(),
            cells: BTreeMap::new(),
            fine_cells: BTreeMap::new(),
            action_vocab: BTreeSet::new(),
            total_tuples: 0,
        }
    }

    fn index_tuple(
        &mut self,
        case_id: &str,
        action: &str,
        damage: DamageCoord,
        slot: PunishSlot,
        fine: Option<u32>,
    ) {
        self.action_vocab.insert(action.to_string());
        self.cells
            .entry((action.to_string(), damage, slot))
            .or_default()
            .push(case_id);
        if let Some(bucket) = fine {
            self.fine_cells
                .entry((action.to_string(), damage, bucket))
                .or_default()
                .push(case_id);
        }
        self.total_tuples += 1;
    }

    fn normalize(&mut self) {
        for cell in self.cells.values_mut() {
            cell.normalize();
        }
        for cell in self.fine_cells.values_mut() {
            cell.normalize();
        }
    }

    pub fn cells(&self) -> impl Iterator<Item = (&MainKey, &Cell)> {
        self.cells.iter()
    }

    pub fn fine_cells(&self) -> impl Iterator<Item = (&FineKey, &Cell)> {
        self.fine_cells.iter()
    }

    /// Sorted action vocabulary of this partition.
    pub fn action_vocab(&self) -> impl Iterator<Item = &str> {
        self.action_vocab.iter().map(String::as_str)
    }

    pub fn action_index(&self, action: &str) -> Option<usize> {
        self.action_vocab.iter().position(|a| a == action)
    }

    pub fn has_action(&self, action: &str) -> bool {
        self.action_vocab.contains(action)
    }

    /// Number of indexed (case, action, damage, punishment) tuples.
    pub fn total_tuples(&self) -> u64 {
        self.total_tuples
    }

    /// Distinct case ids contributing to this partition.
    pub fn case_ids(&self) -> BTreeSet<&str> {
        self.cells
            .values()
            .flat_map(|cell| cell.postings.iter().map(String::as_str))
            .collect()
    }

    fn merge(&mut self, other: &DistributionMatrix) {
        for (key, cell) in &other.cells {
            self.cells.entry(key.clone()).or_default().merge(cell);
        }
        for (key, cell) in &other.fine_cells {
            self.fine_cells.entry(key.clone()).or_default().merge(cell);
        }
        for action in &other.action_vocab {
            self.action_vocab.insert(action.clone());
        }
        self.total_tuples += other.total_tuples;
    }
}

/// The matrix axes, identified by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AxisId {
    Action,
    Damage,
    Punishment,
}

impl AxisId {
    pub fn name(self) -> &'static str {
        match self {
            AxisId::Action => "action",
            AxisId::Damage => "damage",
            AxisId::Punishment => "punishment",
        }
    }

    pub fn parse(name: &str) -> Option<AxisId> {
        Some(match name {
            "action" => AxisId::Action,
            "damage" => AxisId::Damage,
            "punishment" => AxisId::Punishment,
            _ => return None,
        })
    }
}

/// What a forward-index entry points at.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ForwardTarget {
    /// An axis-level coordinate: one feature on one axis of a partition.
    AxisCoordinate {
        partition: String,
        axis: AxisId,
        index: usize,
    },
    /// A two-coordinate slice: a fixed action crossed with a whole axis.
    Slice {
        partition: String,
        action_index: usize,
        axis: AxisId,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PathError {
    #[error("path must start with the JDD segment, found {0:?}")]
    NotJddRooted(String),
    #[error("path segment {0:?} cannot be resolved")]
    Unresolvable(String),
    #[error("trigger {0:?} is ambiguous across partitions {1:?}; qualify the path")]
    Ambiguous(String, Vec<String>),
    #[error("empty path")]
    Empty,
}

/// A cell or slice query for [`KnowledgeBase::get_cases`]. Unspecified axes
/// are unioned over.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CellQuery {
    pub partition: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub damage: Option<DamageCoord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub punishment: Option<PunishCellCoord>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildReport {
    pub records_seen: usize,
    pub records_indexed: usize,
    pub duplicate_case_ids: usize,
    pub constraint_violating_records: usize,
    pub records_without_conviction: usize,
    pub tuples_indexed: u64,
}

/// The built knowledge base: one matrix per convicted crime type plus the
/// forward index. Immutable once built; queries never mutate it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnowledgeBase {
    pub scale: ScaleConfig,
    pub partitions: BTreeMap<String, DistributionMatrix>,
    forward: BTreeMap<String, ForwardTarget>,
    case_ids: BTreeSet<String>,
}

impl KnowledgeBase {
    fn empty(scale: ScaleConfig) -> Self {
        KnowledgeBase {
            scale,
            partitions: BTreeMap::new(),
            forward: BTreeMap::new(),
            case_ids: BTreeSet::new(),
        }
    }

    pub fn partition(&self, crime: &str) -> Option<&DistributionMatrix> {
        self.partitions.get(crime)
    }

    pub fn forward_index(&self) -> impl Iterator<Item = (&str, &ForwardTarget)> {
        self.forward.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn known_case_ids(&self) -> impl Iterator<Item = &str> {
        self.case_ids.iter().map(String::as_str)
    }

    /// Reverse-index retrieval. A full coordinate triple returns the cell's
    /// postings; partial coordinates return the union over the unspecified
    /// axes. Output is deduplicated and sorted by case id. Unknown
    /// partitions or coordinates yield an empty result plus a diagnostic.
    pub fn get_cases(&self, query: &CellQuery, diags: &mut Vec<Diagnostic>) -> Vec<String> {
        let Some(matrix) = self.partitions.get(&query.partition) else {
            diags.push(Diagnostic::new(
                "get_cases",
                format!("unknown partition {:?}", query.partition),
            ));
            return Vec::new();
        };
        if let Some(action) = &query.action {
            if !matrix.has_action(action) {
                diags.push(Diagnostic::new(
                    "get_cases",
                    format!(
                        "unknown action {action:?} in partition {:?}",
                        query.partition
                    ),
                ));
                return Vec::new();
            }
        }
        if let Some(DamageCoord::Money(bucket)) = query.damage {
            if bucket >= self.scale.damage_axis.num_money_buckets(&query.partition) {
                diags.push(Diagnostic::new(
                    "get_cases",
                    format!("monetary damage bucket {bucket} is out of range"),
                ));
                return Vec::new();
            }
        }
        let mut out: BTreeSet<String> = BTreeSet::new();
        match query.punishment {
            Some(PunishCellCoord::Fine(bucket)) => {
                if bucket >= self.scale.fine_buckets.num_buckets() {
                    diags.push(Diagnostic::new(
                        "get_cases",
                        format!("fine bucket {bucket} is out of range"),
                    ));
                    return Vec::new();
                }
                for ((action, damage, fine), cell) in matrix.fine_cells() {
                    if *fine != bucket {
                        continue;
                    }
                    if query.action.as_deref().is_some_and(|a| a != action) {
                        continue;
                    }
                    if query.damage.is_some_and(|d| d != *damage) {
                        continue;
                    }
                    out.extend(cell.postings.iter().cloned());
                }
            }
            punishment => {
                if let Some(PunishCellCoord::Slot(PunishSlot::Level(level))) = punishment {
                    if level >= self.scale.scale.num_levels() {
                        diags.push(Diagnostic::new(
                            "get_cases",
                            format!("punishment level {level} is out of range"),
                        ));
                        return Vec::new();
                    }
                }
                for ((action, damage, slot), cell) in matrix.cells() {
                    if let Some(PunishCellCoord::Slot(wanted)) = punishment {
                        if wanted != *slot {
                            continue;
                        }
                    }
                    if query.action.as_deref().is_some_and(|a| a != action) {
                        continue;
                    }
                    if query.damage.is_some_and(|d| d != *damage) {
                        continue;
                    }
                    out.extend(cell.postings.iter().cloned());
                }
            }
        }
        out.into_iter().collect()
    }

    /// Resolves a dotted schema path against the forward index. Structural
    /// segments (discourse names and `sentence`) are skipped; a partition
    /// segment qualifies the lookup, and a path without one resolves only if
    /// the trigger occurs in exactly one partition.
    pub fn resolve_forward(&self, path: &str) -> Result<ForwardTarget, PathError> {
        let segments: Vec<&str> = path.split('.').collect();
        if segments.is_empty() || segments[0].is_empty() {
            return Err(PathError::Empty);
        }
        if segments[0] != "JDD" {
            return Err(PathError::NotJddRooted(segments[0].to_string()));
        }
        const STRUCTURAL: &[&str] = &[
            "prosecutorArgument",
            "prosecutorEvidence",
            "prosecutorOpinion",
            "defendantArgument",
            "defendantEvidence",
            "courtFacts",
            "courtEvidence",
            "caseBackground",
            "sentence",
            "sentences",
            "fact",
            "facts",
        ];
        let mut i = 1;
        let mut partition: Option<&str> = None;
        while i < segments.len() {
            let seg = segments[i];
            if self.partitions.contains_key(seg) {
                partition = Some(seg);
                i += 1;
            } else if STRUCTURAL.contains(&seg) {
                i += 1;
            } else {
                break;
            }
        }
        let mut explicit_actions = false;
        if i < segments.len() && segments[i] == "actions" {
            explicit_actions = true;
            i += 1;
        }
        let Some(trigger) = segments.get(i) else {
            return Err(PathError::Unresolvable(
                segments.last().unwrap_or(&"").to_string(),
            ));
        };
        i += 1;
        let wants_slice = match segments.get(i) {
            None if explicit_actions => false,
            Some(&"punishment") if i == segments.len() - 1 => true,
            Some(seg) => return Err(PathError::Unresolvable((*seg).to_string())),
            None => return Err(PathError::Unresolvable((*trigger).to_string())),
        };
        let partition = match partition {
            Some(p) => p.to_string(),
            None => {
                let holders: Vec<String> = self
                    .partitions
                    .iter()
                    .filter(|(_, m)| m.has_action(trigger))
                    .map(|(name, _)| name.clone())
                    .collect();
                match holders.len() {
                    0 => return Err(PathError::Unresolvable((*trigger).to_string())),
                    1 => holders.into_iter().next().unwrap(),
                    _ => return Err(PathError::Ambiguous((*trigger).to_string(), holders)),
                }
            }
        };
        let key = if wants_slice {
            format!("JDD.{partition}.actions.{trigger}.punishment")
        } else {
            format!("JDD.{partition}.actions.{trigger}")
        };
        self.forward
            .get(&key)
            .cloned()
            .ok_or_else(|| PathError::Unresolvable((*trigger).to_string()))
    }

    fn rebuild_forward(&mut self) {
        self.forward.clear();
        for (partition, matrix) in &self.partitions {
            for (index, action) in matrix.action_vocab().enumerate() {
                self.forward.insert(
                    format!("JDD.{partition}.actions.{action}"),
                    ForwardTarget::AxisCoordinate {
                        partition: partition.clone(),
                        axis: AxisId::Action,
                        index,
                    },
                );
                self.forward.insert(
                    format!("JDD.{partition}.actions.{action}.punishment"),
                    ForwardTarget::Slice {
                        partition: partition.clone(),
                        action_index: index,
                        axis: AxisId::Punishment,
                    },
                );
            }
        }
    }
}

/// Builds the knowledge base from extracted records. Records whose
/// punishment vectors violate the constraint table are counted and skipped
/// whole; duplicate case ids after the first are skipped.
pub fn build_matrix(
    records: &[JddRecord],
    config: &EngineConfig,
    diags: &mut Vec<Diagnostic>,
) -> (KnowledgeBase, BuildReport) {
    let mut kb = KnowledgeBase::empty(config.scale.clone());
    let mut report = BuildReport::default();
    for record in records {
        report.records_seen += 1;
        if kb.case_ids.contains(&record.case_id) {
            report.duplicate_case_ids += 1;
            diags.push(Diagnostic::new(
                record.case_id.clone(),
                "duplicate case id; record skipped",
            ));
            continue;
        }
        let violating = record
            .punishments
            .iter()
            .any(|(_, v)| !config.constraints.validate(v).is_empty());
        if violating {
            report.constraint_violating_records += 1;
            diags.push(Diagnostic::new(
                record.case_id.clone(),
                "punishment vector violates integrity constraints; record excluded from the matrix",
            ));
            continue;
        }
        let tuples = record_to_feature_set(record, &config.scale, diags);
        if record.punishments.is_empty() {
            report.records_without_conviction += 1;
            continue;
        }
        kb.case_ids.insert(record.case_id.clone());
        report.records_indexed += 1;
        for tuple in tuples {
            let matrix = kb
                .partitions
                .entry(tuple.crime.clone())
                .or_insert_with(|| DistributionMatrix::new(&tuple.crime));
            matrix.index_tuple(
                &record.case_id,
                &tuple.action,
                tuple.damage,
                tuple.punishment.slot,
                tuple.punishment.fine,
            );
            report.tuples_indexed += 1;
        }
    }
    for matrix in kb.partitions.values_mut() {
        matrix.normalize();
    }
    kb.rebuild_forward();
    (kb, report)
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MergeError {
    #[error("knowledge bases were built under different scale configurations")]
    ConfigMismatch,
    #[error("case id {0:?} appears in both knowledge bases")]
    OverlappingCases(String),
}

/// Merges two knowledge bases built from disjoint corpora under the same
/// configuration. `merge(build(A), build(B)) == build(A ∪ B)`.
pub fn merge(a: &KnowledgeBase, b: &KnowledgeBase) -> Result<KnowledgeBase, MergeError> {
    if a.scale != b.scale {
        return Err(MergeError::ConfigMismatch);
    }
    if let Some(shared) = a.case_ids.intersection(&b.case_ids).next() {
        return Err(MergeError::OverlappingCases(shared.clone()));
    }
    let mut out = a.clone();
    for (crime, matrix) in &b.partitions {
        out.partitions
            .entry(crime.clone())
            .or_insert_with(|| DistributionMatrix::new(crime))
            .merge(matrix);
    }
    out.case_ids.extend(b.case_ids.iter().cloned());
    out.rebuild_forward();
    Ok(out)
}
