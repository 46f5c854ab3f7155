//! Landscape-analysis primitives over an immutable knowledge base:
//! marginals, elbow cutoffs on sorted histograms, axis-value selection,
//! importance scores, and the two analysis pipelines (conditional punishment
//! densities by case group; rare punishments and exemption circumstances).

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use alloc::{format, vec};

use serde::{Deserialize, Serialize};

use crate::kb::{AxisId, KnowledgeBase};
use crate::model::{FactClass, JddRecord};
use crate::scale::{DamageCoord, PunishSlot};
use crate::Diagnostic;

/// Tolerance below which a chord distance counts as zero: constant or
/// strictly linear histograms have no elbow.
pub const ELBOW_TOLERANCE: f64 = 1e-6;

/// One point of a histogram coordinate, typed by axis.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoordComponent {
    Action(String),
    Damage(DamageCoord),
    Punishment(PunishSlot),
}

pub type Coord = Vec<CoordComponent>;

/// An ordered histogram over one or two matrix axes. Zero-valued
/// coordinates are omitted; an empty partition therefore yields an empty
/// (all-zero) histogram.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub axes: Vec<AxisId>,
    pub entries: Vec<(Coord, f64)>,
}

impl Histogram {
    pub fn total(&self) -> f64 {
        self.entries.iter().map(|(_, v)| v).sum()
    }

    pub fn value_at(&self, coord: &Coord) -> f64 {
        self.entries
            .iter()
            .find(|(c, _)| c == coord)
            .map(|(_, v)| *v)
            .unwrap_or(0.0)
    }

    /// Sorts by value descending; ties break on the coordinate's canonical
    /// order so repeated runs are identical.
    pub fn sorted_descending(&self) -> Histogram {
        let mut entries = self.entries.clone();
        entries.sort_by(|(ca, va), (cb, vb)| {
            vb.partial_cmp(va)
                .unwrap_or(core::cmp::Ordering::Equal)
                .then_with(|| ca.cmp(cb))
        });
        Histogram {
            axes: self.axes.clone(),
            entries,
        }
    }

    /// Normalizes values into a density summing to one. Empty or all-zero
    /// histograms come back unchanged.
    pub fn normalized(&self) -> Histogram {
        let total = self.total();
        if total <= 0.0 {
            return self.clone();
        }
        Histogram {
            axes: self.axes.clone(),
            entries: self
                .entries
                .iter()
                .map(|(c, v)| (c.clone(), v / total))
                .collect(),
        }
    }
}

/// How marginal values count contributions: raw tuple counts, or each
/// convicted crime (case) once per marginal cell. The analysis pipelines use
/// distinct-case counting; tuple counting preserves exact additivity with
/// the cell store.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CountMode {
    Tuples,
    DistinctCases,
}

/// Marginal specification: the axes kept, optional coordinate fixings on the
/// other axes, and the counting mode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarginalSpec {
    pub over: Vec<AxisId>,
    #[serde(default)]
    pub fixing: Vec<(AxisId, CoordComponent)>,
    pub mode: CountMode,
}

impl MarginalSpec {
    pub fn over(axis: AxisId, mode: CountMode) -> Self {
        MarginalSpec {
            over: vec![axis],
            fixing: Vec::new(),
            mode,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum QueryError {
    #[error("unknown partition {0:?}")]
    UnknownPartition(String),
    #[error("unknown axis name {0:?}")]
    UnknownAxis(String),
    #[error("axis {0:?} appears both as marginal axis and as fixing")]
    AxisConflict(&'static str),
    #[error("histogram needs at least 3 entries to find an elbow, got {0}")]
    TooFewEntries(usize),
    #[error("histogram is not sorted descending at index {0}")]
    NotSorted(usize),
    #[error("subset histogram contains {0:?} absent from the partition histogram")]
    SubsetNotContained(String),
    #[error("{0}")]
    BadSpec(String),
}

fn component_for(axis: AxisId, key: &(String, DamageCoord, PunishSlot)) -> CoordComponent {
    match axis {
        AxisId::Action => CoordComponent::Action(key.0.clone()),
        AxisId::Damage => CoordComponent::Damage(key.1),
        AxisId::Punishment => CoordComponent::Punishment(key.2),
    }
}

/// Sums cell counts over the unspecified axes of one partition. With a
/// fixing such as punishment = exemption, the remaining axes form the
/// histogram (two-dimensional in that example).
pub fn get_marginals(
    kb: &KnowledgeBase,
    partition: &str,
    spec: &MarginalSpec,
) -> Result<Histogram, QueryError> {
    if spec.over.is_empty() {
        return Err(QueryError::BadSpec("no marginal axis given".to_string()));
    }
    let mut seen: BTreeSet<AxisId> = BTreeSet::new();
    for axis in &spec.over {
        if !seen.insert(*axis) {
            return Err(QueryError::BadSpec(format!(
                "axis {} repeated in marginal",
                axis.name()
            )));
        }
    }
    for (axis, _) in &spec.fixing {
        if spec.over.contains(axis) {
            return Err(QueryError::AxisConflict(axis.name()));
        }
    }
    let Some(matrix) = kb.partition(partition) else {
        return Err(QueryError::UnknownPartition(partition.to_string()));
    };
    let mut tuple_counts: BTreeMap<Coord, u64> = BTreeMap::new();
    let mut case_sets: BTreeMap<Coord, BTreeSet<&str>> = BTreeMap::new();
    for (key, cell) in matrix.cells() {
        let fixed_ok = spec
            .fixing
            .iter()
            .all(|(axis, want)| component_for(*axis, key) == *want);
        if !fixed_ok {
            continue;
        }
        let coord: Coord = spec
            .over
            .iter()
            .map(|axis| component_for(*axis, key))
            .collect();
        match spec.mode {
            CountMode::Tuples => {
                *tuple_counts.entry(coord).or_insert(0) += cell.count;
            }
            CountMode::DistinctCases => {
                let set = case_sets.entry(coord).or_default();
                set.extend(cell.postings.iter().map(String::as_str));
            }
        }
    }
    let entries: Vec<(Coord, f64)> = match spec.mode {
        CountMode::Tuples => tuple_counts
            .into_iter()
            .map(|(c, n)| (c, n as f64))
            .collect(),
        CountMode::DistinctCases => case_sets
            .into_iter()
            .map(|(c, s)| (c, s.len() as f64))
            .collect(),
    };
    Ok(Histogram {
        axes: spec.over.clone(),
        entries,
    })
}

/// Outcome of elbow detection on a descending histogram.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ElbowResult {
    Elbow { index: usize, cutoff: f64 },
    NoElbow,
}

/// Finds the elbow of a histogram sorted descending: the entry farthest from
/// the chord joining the first and last points after min-max normalizing
/// both axes. On normalized axes the chord is x + y = 1, so the distance is
/// |x + y - 1| / sqrt(2). Ties take the smallest index; distances all below
/// [`ELBOW_TOLERANCE`] (constant or strictly linear input) mean no elbow.
pub fn find_elbow(h: &Histogram) -> Result<ElbowResult, QueryError> {
    let n = h.entries.len();
    if n < 3 {
        return Err(QueryError::TooFewEntries(n));
    }
    let values: Vec<f64> = h.entries.iter().map(|(_, v)| *v).collect();
    for i in 1..n {
        if values[i] > values[i - 1] {
            return Err(QueryError::NotSorted(i));
        }
    }
    let max = values[0];
    let min = values[n - 1];
    if max - min == 0.0 {
        return Ok(ElbowResult::NoElbow);
    }
    let mut best_index = 0usize;
    let mut best_distance = 0.0f64;
    for (i, v) in values.iter().enumerate() {
        let x = i as f64 / (n - 1) as f64;
        let y = (v - min) / (max - min);
        let distance = (x + y - 1.0).abs() * core::f64::consts::FRAC_1_SQRT_2;
        if distance > best_distance {
            best_distance = distance;
            best_index = i;
        }
    }
    if best_distance < ELBOW_TOLERANCE {
        return Ok(ElbowResult::NoElbow);
    }
    Ok(ElbowResult::Elbow {
        index: best_index,
        cutoff: values[best_index],
    })
}

/// Selects the coordinates whose values satisfy the predicate, preserving
/// the histogram's order.
pub fn get_axis_values(h: &Histogram, predicate: impl Fn(f64) -> bool) -> Vec<Coord> {
    h.entries
        .iter()
        .filter(|(_, v)| predicate(*v))
        .map(|(c, _)| c.clone())
        .collect()
}

/// An action with its exclusivity score for some circumstance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActionScore {
    pub action: String,
    /// Subset frequency divided by partition frequency.
    pub score: f64,
    pub subset_freq: f64,
    pub partition_freq: f64,
}

fn action_freqs(h: &Histogram) -> Result<BTreeMap<String, f64>, QueryError> {
    let mut out = BTreeMap::new();
    for (coord, value) in &h.entries {
        let Some(CoordComponent::Action(action)) = coord.first() else {
            return Err(QueryError::BadSpec(
                "importance scores need action-axis histograms".to_string(),
            ));
        };
        *out.entry(action.clone()).or_insert(0.0) += value;
    }
    Ok(out)
}

/// Scores how exclusive each action is to a circumstance subset: its subset
/// frequency divided by its partition frequency. The most frequent fraction
/// of partition actions (default 5%) is excluded before ranking, since very
/// common actions score high on noise alone. Result is sorted by score,
/// then partition frequency, then action.
pub fn importance_scores(
    subset: &Histogram,
    partition: &Histogram,
    filter_fraction: f64,
) -> Result<Vec<ActionScore>, QueryError> {
    let subset_freqs = action_freqs(subset)?;
    let partition_freqs = action_freqs(partition)?;
    for (action, freq) in &subset_freqs {
        let base = partition_freqs.get(action).copied().unwrap_or(0.0);
        if *freq > 0.0 && base == 0.0 {
            return Err(QueryError::SubsetNotContained(action.clone()));
        }
    }
    let mut by_freq: Vec<(&String, f64)> = partition_freqs.iter().map(|(a, f)| (a, *f)).collect();
    by_freq.sort_by(|(aa, fa), (ab, fb)| {
        fb.partial_cmp(fa)
            .unwrap_or(core::cmp::Ordering::Equal)
            .then_with(|| aa.cmp(ab))
    });
    let excluded_n = (filter_fraction * by_freq.len() as f64) as usize;
    let excluded: BTreeSet<&String> = by_freq.iter().take(excluded_n).map(|(a, _)| *a).collect();

    let mut scores: Vec<ActionScore> = partition_freqs
        .iter()
        .filter(|(action, _)| !excluded.contains(action))
        .map(|(action, partition_freq)| {
            let subset_freq = subset_freqs.get(action).copied().unwrap_or(0.0);
            ActionScore {
                action: action.clone(),
                score: if *partition_freq > 0.0 {
                    subset_freq / partition_freq
                } else {
                    0.0
                },
                subset_freq,
                partition_freq: *partition_freq,
            }
        })
        .collect();
    scores.sort_by(|a, b| {
        b.score
            .partial_cmp(&a.score)
            .unwrap_or(core::cmp::Ordering::Equal)
            .then_with(|| {
                b.partition_freq
                    .partial_cmp(&a.partition_freq)
                    .unwrap_or(core::cmp::Ordering::Equal)
            })
            .then_with(|| a.action.cmp(&b.action))
    });
    Ok(scores)
}

/// How cases split into the two compared groups.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum GroupSplitter {
    /// Cases with at least one defendant-argument sentence versus the rest.
    DefenseArgument,
    /// Cases whose actions include a forgiveness term (lemma match against
    /// the synonym set) with no negating modifier, versus the rest.
    Forgiveness {
        terms: Vec<String>,
        negations: Vec<String>,
    },
}

impl GroupSplitter {
    pub fn group_names(&self) -> (&'static str, &'static str) {
        match self {
            GroupSplitter::DefenseArgument => ("with_defense", "without_defense"),
            GroupSplitter::Forgiveness { .. } => ("with_forgiveness", "without_forgiveness"),
        }
    }

    fn selects(&self, record: &JddRecord) -> bool {
        match self {
            GroupSplitter::DefenseArgument => record.fact_sentences.iter().any(|s| {
                s.fact_class == FactClass::DefendantArgument && !s.text.is_empty()
            }),
            GroupSplitter::Forgiveness { terms, negations } => {
                record.actions.iter().any(|action| {
                    terms.iter().any(|t| t == &action.trigger)
                        && !action.action_modifier.iter().any(|m| {
                            negations.iter().any(|n| m == n || m.starts_with(n.as_str()))
                        })
                })
            }
        }
    }
}

/// Which conditional densities the first pipeline emits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Conditioner {
    PerDamage,
    Pooled,
    Both,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupDensities {
    pub name: String,
    pub cases: usize,
    /// Punishment density conditioned on each damage coordinate present in
    /// the group.
    pub per_damage: Vec<(DamageCoord, Histogram)>,
    /// Punishment density pooled over all damages of the group.
    pub pooled: Option<Histogram>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Question1Output {
    pub partition: String,
    pub groups: Vec<GroupDensities>,
}

fn punishment_density_for(
    kb: &KnowledgeBase,
    partition: &str,
    group: &BTreeSet<&str>,
    damage: Option<DamageCoord>,
) -> Histogram {
    let mut per_slot: BTreeMap<PunishSlot, BTreeSet<&str>> = BTreeMap::new();
    if let Some(matrix) = kb.partition(partition) {
        for ((_, cell_damage, slot), cell) in matrix.cells() {
            if damage.is_some_and(|d| d != *cell_damage) {
                continue;
            }
            let members: Vec<&str> = cell
                .postings
                .iter()
                .map(String::as_str)
                .filter(|id| group.contains(id))
                .collect();
            if !members.is_empty() {
                per_slot.entry(*slot).or_default().extend(members);
            }
        }
    }
    let histogram = Histogram {
        axes: vec![AxisId::Punishment],
        entries: per_slot
            .into_iter()
            .map(|(slot, cases)| {
                (
                    vec![CoordComponent::Punishment(slot)],
                    cases.len() as f64,
                )
            })
            .collect(),
    };
    histogram.normalized()
}

/// The first analysis pipeline: split the partition's cases into two groups,
/// list the damages present in each group, and emit the normalized
/// punishment density per (group, damage) plus the pooled density per group.
pub fn question1_pipeline(
    kb: &KnowledgeBase,
    records: &[JddRecord],
    partition: &str,
    splitter: &GroupSplitter,
    conditioner: Conditioner,
    diags: &mut Vec<Diagnostic>,
) -> Result<Question1Output, QueryError> {
    let Some(matrix) = kb.partition(partition) else {
        return Err(QueryError::UnknownPartition(partition.to_string()));
    };
    // The comparison is within this crime type: only the partition's cases
    // split into the two groups.
    let members = matrix.case_ids();
    let mut selected: BTreeSet<&str> = BTreeSet::new();
    let mut rest: BTreeSet<&str> = BTreeSet::new();
    for record in records {
        if !members.contains(record.case_id.as_str()) {
            continue;
        }
        if splitter.selects(record) {
            selected.insert(&record.case_id);
        } else {
            rest.insert(&record.case_id);
        }
    }
    let (name_selected, name_rest) = splitter.group_names();
    let mut groups = Vec::new();
    for (name, group) in [(name_selected, &selected), (name_rest, &rest)] {
        if group.is_empty() {
            diags.push(Diagnostic::new(
                "question1",
                format!("group {name} is empty"),
            ));
            groups.push(GroupDensities {
                name: name.to_string(),
                cases: 0,
                per_damage: Vec::new(),
                pooled: None,
            });
            continue;
        }
        // Damages present in the group: cells whose postings intersect it.
        let mut damages: BTreeSet<DamageCoord> = BTreeSet::new();
        for ((_, damage, _), cell) in matrix.cells() {
            if cell.postings.iter().any(|id| group.contains(id.as_str())) {
                damages.insert(*damage);
            }
        }
        let per_damage = if matches!(conditioner, Conditioner::PerDamage | Conditioner::Both) {
            damages
                .iter()
                .map(|d| (*d, punishment_density_for(kb, partition, group, Some(*d))))
                .filter(|(_, h)| !h.entries.is_empty())
                .collect()
        } else {
            Vec::new()
        };
        let pooled = matches!(conditioner, Conditioner::Pooled | Conditioner::Both)
            .then(|| punishment_density_for(kb, partition, group, None));
        groups.push(GroupDensities {
            name: name.to_string(),
            cases: group.len(),
            per_damage,
            pooled,
        });
    }
    Ok(Question1Output {
        partition: partition.to_string(),
        groups,
    })
}

/// A rare punishment with the circumstances it occurs under.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RarePunishment {
    pub slot: PunishSlot,
    pub cases: f64,
    /// (action, damage, distinct cases) contexts for this punishment.
    pub contexts: Vec<(String, DamageCoord, u64)>,
}

/// A conviction whose deprivation duration is not a whole number of
/// 3-month units, i.e. not a quarter, half year or year.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OffUnitDuration {
    pub case_id: String,
    pub crime: String,
    pub months: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Question2aOutput {
    pub partition: String,
    /// Punishment histogram sorted descending, counting each convicted
    /// crime once.
    pub histogram: Histogram,
    pub cutoff: Option<f64>,
    pub no_rare_tail: bool,
    pub rare: Vec<RarePunishment>,
    pub off_unit: Vec<OffUnitDuration>,
}

/// The second pipeline, part (a): punishments rare for a crime type. The
/// punishment marginal is sorted descending and cut at its elbow; everything
/// at or below the cutoff is the rare tail, reported with its action/damage
/// contexts. Durations off the 3-month grid are reported separately from
/// the records.
pub fn question2a_pipeline(
    kb: &KnowledgeBase,
    records: &[JddRecord],
    partition: &str,
) -> Result<Question2aOutput, QueryError> {
    let marginal = get_marginals(
        kb,
        partition,
        &MarginalSpec::over(AxisId::Punishment, CountMode::DistinctCases),
    )?;
    let sorted = marginal.sorted_descending();
    let elbow = if sorted.entries.len() >= 3 {
        find_elbow(&sorted)?
    } else {
        ElbowResult::NoElbow
    };
    let matrix = kb
        .partition(partition)
        .ok_or_else(|| QueryError::UnknownPartition(partition.to_string()))?;
    let (cutoff, no_rare_tail, rare_coords) = match elbow {
        ElbowResult::NoElbow => (None, true, Vec::new()),
        ElbowResult::Elbow { cutoff, .. } => {
            let keep = get_axis_values(&sorted, |v| v > cutoff);
            let rare: Vec<Coord> = sorted
                .entries
                .iter()
                .map(|(c, _)| c.clone())
                .filter(|c| !keep.contains(c))
                .collect();
            (Some(cutoff), false, rare)
        }
    };
    let mut rare = Vec::new();
    for coord in rare_coords {
        let Some(CoordComponent::Punishment(slot)) = coord.first().cloned() else {
            continue;
        };
        let mut contexts: Vec<(String, DamageCoord, u64)> = Vec::new();
        for ((action, damage, cell_slot), cell) in matrix.cells() {
            if *cell_slot == slot {
                let distinct: BTreeSet<&str> =
                    cell.postings.iter().map(String::as_str).collect();
                contexts.push((action.clone(), *damage, distinct.len() as u64));
            }
        }
        rare.push(RarePunishment {
            slot,
            cases: sorted.value_at(&coord),
            contexts,
        });
    }
    let mut off_unit = Vec::new();
    for record in records {
        for (crime, vector) in &record.punishments {
            if crime != partition {
                continue;
            }
            let months = vector.public_surveillance_months
                + vector.detention_months
                + vector.fixed_term_months;
            if months > 0 && months % 3 != 0 {
                off_unit.push(OffUnitDuration {
                    case_id: record.case_id.clone(),
                    crime: crime.clone(),
                    months,
                });
            }
        }
    }
    Ok(Question2aOutput {
        partition: partition.to_string(),
        histogram: sorted,
        cutoff,
        no_rare_tail,
        rare,
        off_unit,
    })
}

/// Dense heatmap data for export: explicit zeros, deterministic ordering.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeatmapData {
    pub row_axis: String,
    pub col_axis: String,
    pub rows: Vec<String>,
    pub cols: Vec<String>,
    pub values: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Question2bOutput {
    pub partition: String,
    pub exemption_cases: u64,
    pub scores: Vec<ActionScore>,
    pub heatmap: HeatmapData,
}

/// The second pipeline, part (b): the circumstances under which punishment
/// is exemption. Fixes punishment = exemption, scores actions by importance,
/// keeps the top k, and lays their damage co-occurrences out as a heatmap.
pub fn question2b_pipeline(
    kb: &KnowledgeBase,
    partition: &str,
    k: usize,
    filter_fraction: f64,
) -> Result<Question2bOutput, QueryError> {
    let exemption_fix = (
        AxisId::Punishment,
        CoordComponent::Punishment(PunishSlot::Level(0)),
    );
    let two_d = get_marginals(
        kb,
        partition,
        &MarginalSpec {
            over: vec![AxisId::Action, AxisId::Damage],
            fixing: vec![exemption_fix.clone()],
            mode: CountMode::DistinctCases,
        },
    )?;
    let subset_actions = get_marginals(
        kb,
        partition,
        &MarginalSpec {
            over: vec![AxisId::Action],
            fixing: vec![exemption_fix],
            mode: CountMode::DistinctCases,
        },
    )?;
    let partition_actions = get_marginals(
        kb,
        partition,
        &MarginalSpec::over(AxisId::Action, CountMode::DistinctCases),
    )?;
    let exemption_cases = get_marginals(
        kb,
        partition,
        &MarginalSpec {
            over: vec![AxisId::Punishment],
            fixing: Vec::new(),
            mode: CountMode::DistinctCases,
        },
    )?
    .value_at(&vec![CoordComponent::Punishment(PunishSlot::Level(0))])
        as u64;

    let scores = importance_scores(&subset_actions, &partition_actions, filter_fraction)?;
    let top: Vec<ActionScore> = scores.into_iter().take(k).collect();

    let mut damages: BTreeSet<DamageCoord> = BTreeSet::new();
    for (coord, _) in &two_d.entries {
        if let Some(CoordComponent::Damage(d)) = coord.get(1) {
            damages.insert(*d);
        }
    }
    let cols: Vec<DamageCoord> = damages.into_iter().collect();
    let mut values = Vec::with_capacity(top.len());
    for score in &top {
        let mut row = Vec::with_capacity(cols.len());
        for damage in &cols {
            let coord = vec![
                CoordComponent::Action(score.action.clone()),
                CoordComponent::Damage(*damage),
            ];
            row.push(two_d.value_at(&coord));
        }
        values.push(row);
    }
    let heatmap = HeatmapData {
        row_axis: "action".to_string(),
        col_axis: "damage".to_string(),
        rows: top.iter().map(|s| s.action.clone()).collect(),
        cols: cols
            .iter()
            .map(|d| d.label(partition, &kb.scale.damage_axis))
            .collect(),
        values,
    };
    Ok(Question2bOutput {
        partition: partition.to_string(),
        exemption_cases,
        scores: top,
        heatmap,
    })
}

/// Turns a 2-D histogram into dense heatmap data with explicit zeros.
pub fn heatmap_from_histogram(
    h: &Histogram,
    kb: &KnowledgeBase,
    partition: &str,
) -> Result<HeatmapData, QueryError> {
    if h.axes.len() != 2 {
        return Err(QueryError::BadSpec(format!(
            "heatmaps need 2-D histograms, got {} axes",
            h.axes.len()
        )));
    }
    let mut rows: BTreeSet<&CoordComponent> = BTreeSet::new();
    let mut cols: BTreeSet<&CoordComponent> = BTreeSet::new();
    for (coord, _) in &h.entries {
        if coord.len() == 2 {
            rows.insert(&coord[0]);
            cols.insert(&coord[1]);
        }
    }
    let label = |c: &CoordComponent| -> String {
        match c {
            CoordComponent::Action(a) => a.clone(),
            CoordComponent::Damage(d) => d.label(partition, &kb.scale.damage_axis),
            CoordComponent::Punishment(p) => p.label(&kb.scale.scale),
        }
    };
    let row_list: Vec<&CoordComponent> = rows.into_iter().collect();
    let col_list: Vec<&CoordComponent> = cols.into_iter().collect();
    let mut values = Vec::with_capacity(row_list.len());
    for row in &row_list {
        let mut out_row = Vec::with_capacity(col_list.len());
        for col in &col_list {
            let coord = vec![(*row).clone(), (*col).clone()];
            out_row.push(h.value_at(&coord));
        }
        values.push(out_row);
    }
    Ok(HeatmapData {
        row_axis: h.axes[0].name().to_string(),
        col_axis: h.axes[1].name().to_string(),
        rows: row_list.into_iter().map(label).collect(),
        cols: col_list.into_iter().map(label).collect(),
        values,
    })
}
