//! Coordinate systems of the distribution matrix: the discretized punishment
//! scale, the damage axis and the parallel fine-bucket table.
//!
//! Punishment levels use a 3-month unit. Exemption, life imprisonment, death
//! with probation and the death penalty each take one unit of their own, so
//! the default scale is 1 + 76 + 3 = 80 levels. Fines live on a parallel
//! bucket table instead of the deprivation scale; mixing the two on one axis
//! would impose an ordering that does not exist.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use alloc::{format, vec};

use serde::{Deserialize, Serialize};

use crate::model::{DamageValue, InjuryLevel, PunishmentVector};
use crate::Diagnostic;

/// How surveillance, detention and fixed-term months combine into one
/// deprivation-of-liberty duration before bucketing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DeprivationMode {
    /// Total months across the three components (default).
    Sum,
    /// The largest single component.
    Max,
}

impl Default for DeprivationMode {
    fn default() -> Self {
        DeprivationMode::Sum
    }
}

/// The ordered punishment-level scale: level 0 is exemption, levels
/// `1..=steps` are 3-month deprivation steps, and the top three levels are
/// life imprisonment, death with probation and death.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PunishmentScale {
    pub steps: u32,
}

impl Default for PunishmentScale {
    fn default() -> Self {
        PunishmentScale { steps: 76 }
    }
}

impl PunishmentScale {
    pub fn num_levels(&self) -> u32 {
        1 + self.steps + 3
    }

    pub const EXEMPTION: u32 = 0;

    pub fn life_level(&self) -> u32 {
        self.steps + 1
    }

    pub fn death_with_probation_level(&self) -> u32 {
        self.steps + 2
    }

    pub fn death_level(&self) -> u32 {
        self.steps + 3
    }

    /// Maps a deprivation duration onto the step region: ceil(months / 3),
    /// clamped to the last step. Monotone in `months`.
    pub fn step_for_months(&self, months: u32) -> u32 {
        let step = months.div_ceil(3);
        step.min(self.steps).max(1)
    }

    pub fn level_label(&self, level: u32) -> String {
        if level == Self::EXEMPTION {
            "exemption".to_string()
        } else if level <= self.steps {
            format!("{}-{}mo", 3 * level - 2, 3 * level)
        } else if level == self.life_level() {
            "life".to_string()
        } else if level == self.death_with_probation_level() {
            "death_with_probation".to_string()
        } else if level == self.death_level() {
            "death".to_string()
        } else {
            format!("level-{level}")
        }
    }

    /// Parses a level out of a query-spec label: a named special, an
    /// explicit `level:<i>`, or `months:<m>` bucketed onto the step region.
    pub fn parse_level_label(&self, label: &str) -> Option<u32> {
        match label {
            "exemption" => Some(Self::EXEMPTION),
            "life" => Some(self.life_level()),
            "death_with_probation" => Some(self.death_with_probation_level()),
            "death" => Some(self.death_level()),
            _ => {
                if let Some(rest) = label.strip_prefix("level:") {
                    let level: u32 = rest.parse().ok()?;
                    (level < self.num_levels()).then_some(level)
                } else if let Some(rest) = label.strip_prefix("months:") {
                    let months: u32 = rest.parse().ok()?;
                    (months > 0).then(|| self.step_for_months(months))
                } else {
                    None
                }
            }
        }
    }
}

/// The parallel fine-bucket table. `edges` are inclusive upper bounds of
/// each bucket; amounts above the last edge fall into one final open bucket.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FineBuckets {
    pub edges: Vec<u64>,
}

impl Default for FineBuckets {
    fn default() -> Self {
        FineBuckets {
            edges: vec![1_000, 5_000, 10_000, 50_000, 100_000],
        }
    }
}

impl FineBuckets {
    pub fn num_buckets(&self) -> u32 {
        self.edges.len() as u32 + 1
    }

    pub fn bucket(&self, amount_yuan: u64) -> u32 {
        self.edges.partition_point(|edge| amount_yuan > *edge) as u32
    }

    pub fn label(&self, bucket: u32) -> String {
        bucket_range_label("fine", &self.edges, bucket)
    }
}

fn bucket_range_label(prefix: &str, edges: &[u64], bucket: u32) -> String {
    let b = bucket as usize;
    if b == 0 {
        format!("{prefix}:0-{}", edges.first().copied().unwrap_or(0))
    } else if b < edges.len() {
        format!("{prefix}:{}-{}", edges[b - 1], edges[b])
    } else {
        format!("{prefix}:>{}", edges.last().copied().unwrap_or(0))
    }
}

/// Monetary-damage bucket edges, optionally specialised per crime type.
/// Edges must be strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DamageAxisConfig {
    pub money_edges: Vec<u64>,
    #[serde(default)]
    pub per_crime_edges: BTreeMap<String, Vec<u64>>,
}

impl Default for DamageAxisConfig {
    fn default() -> Self {
        DamageAxisConfig {
            money_edges: vec![1_000, 5_000, 20_000, 100_000],
            per_crime_edges: BTreeMap::new(),
        }
    }
}

impl DamageAxisConfig {
    pub fn edges_for(&self, crime: &str) -> &[u64] {
        self.per_crime_edges
            .get(crime)
            .map(Vec::as_slice)
            .unwrap_or(&self.money_edges)
    }

    pub fn money_bucket(&self, crime: &str, amount_yuan: u64) -> u32 {
        let edges = self.edges_for(crime);
        edges.partition_point(|edge| amount_yuan > *edge) as u32
    }

    pub fn num_money_buckets(&self, crime: &str) -> u32 {
        self.edges_for(crime).len() as u32 + 1
    }

    pub fn validate(&self) -> Result<(), ScaleConfigError> {
        for edges in core::iter::once(&self.money_edges).chain(self.per_crime_edges.values()) {
            if edges.is_empty() {
                return Err(ScaleConfigError::EmptyEdges);
            }
            if edges.windows(2).any(|w| w[0] >= w[1]) {
                return Err(ScaleConfigError::EdgesNotIncreasing);
            }
        }
        Ok(())
    }

    pub fn money_label(&self, crime: &str, bucket: u32) -> String {
        bucket_range_label("money", self.edges_for(crime), bucket)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScaleConfigError {
    #[error("monetary damage bucket edges must not be empty")]
    EmptyEdges,
    #[error("monetary damage bucket edges must be strictly increasing")]
    EdgesNotIncreasing,
}

/// A coordinate on the damage axis. Ordered: the reserved no-damage slot,
/// then injury levels by severity, then monetary buckets.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize,
)]
#[serde(rename_all = "snake_case")]
pub enum DamageCoord {
    NoDamage,
    Injury(InjuryLevel),
    Money(u32),
}

impl DamageCoord {
    pub fn label(&self, crime: &str, damage_axis: &DamageAxisConfig) -> String {
        match self {
            DamageCoord::NoDamage => "none".to_string(),
            DamageCoord::Injury(level) => format!("injury:{}", level.name()),
            DamageCoord::Money(bucket) => damage_axis.money_label(crime, *bucket),
        }
    }

    pub fn parse_label(label: &str) -> Option<DamageCoord> {
        if label == "none" || label == "no_damage" {
            Some(DamageCoord::NoDamage)
        } else if let Some(rest) = label.strip_prefix("injury:") {
            InjuryLevel::parse(rest).map(DamageCoord::Injury)
        } else if let Some(rest) = label.strip_prefix("money:") {
            rest.parse().ok().map(DamageCoord::Money)
        } else {
            None
        }
    }
}

/// The main-axis punishment coordinate of one indexed tuple. `FineOnly` and
/// `Unspecified` are reserved slots outside the ordered level scale, kept so
/// no case silently disappears from the partition totals.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize,
)]
#[serde(rename_all = "snake_case")]
pub enum PunishSlot {
    Level(u32),
    FineOnly,
    Unspecified,
}

impl PunishSlot {
    pub fn label(&self, scale: &PunishmentScale) -> String {
        match self {
            PunishSlot::Level(level) => scale.level_label(*level),
            PunishSlot::FineOnly => "fine-only".to_string(),
            PunishSlot::Unspecified => "unspecified".to_string(),
        }
    }
}

/// A cell-addressable punishment coordinate: a main-axis slot or a bucket of
/// the parallel fine table.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize,
)]
#[serde(rename_all = "snake_case")]
pub enum PunishCellCoord {
    Slot(PunishSlot),
    Fine(u32),
}

/// The bucketing of one punishment vector: its main-axis slot plus the fine
/// bucket when a fine was imposed alongside.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize,
)]
pub struct BucketAssignment {
    pub slot: PunishSlot,
    pub fine: Option<u32>,
}

/// Everything needed to map extracted values onto matrix coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct ScaleConfig {
    pub scale: PunishmentScale,
    pub fine_buckets: FineBuckets,
    pub damage_axis: DamageAxisConfig,
    pub deprivation: DeprivationMode,
}

impl ScaleConfig {
    pub fn damage_coord(&self, crime: &str, damage: &DamageValue) -> DamageCoord {
        match damage {
            DamageValue::Injury { injury_level } => DamageCoord::Injury(*injury_level),
            DamageValue::Monetary { amount_yuan } => {
                DamageCoord::Money(self.damage_axis.money_bucket(crime, *amount_yuan))
            }
        }
    }

    pub(crate) fn bucket_punishment_for(
        &self,
        scope: &str,
        v: &PunishmentVector,
        diags: &mut Vec<Diagnostic>,
    ) -> BucketAssignment {
        bucket_punishment(
            v,
            &self.scale,
            &self.fine_buckets,
            self.deprivation,
            scope,
            diags,
        )
    }
}

/// Buckets a punishment vector onto the scale. Binary specials take their
/// dedicated levels; otherwise the combined deprivation months map onto the
/// 3-month step region. Probation, political-rights deprivation and
/// confiscation are recorded on the vector but do not move the bucket.
pub fn bucket_punishment(
    v: &PunishmentVector,
    scale: &PunishmentScale,
    fines: &FineBuckets,
    mode: DeprivationMode,
    scope: &str,
    diags: &mut Vec<Diagnostic>,
) -> BucketAssignment {
    let fine = (v.fine_yuan > 0).then(|| fines.bucket(v.fine_yuan));
    let slot = if v.exemption {
        PunishSlot::Level(PunishmentScale::EXEMPTION)
    } else if v.death_with_probation {
        PunishSlot::Level(scale.death_with_probation_level())
    } else if v.death {
        PunishSlot::Level(scale.death_level())
    } else if v.life_imprisonment {
        PunishSlot::Level(scale.life_level())
    } else {
        let months = match mode {
            DeprivationMode::Sum => v
                .public_surveillance_months
                .saturating_add(v.detention_months)
                .saturating_add(v.fixed_term_months),
            DeprivationMode::Max => v
                .public_surveillance_months
                .max(v.detention_months)
                .max(v.fixed_term_months),
        };
        if months > 0 {
            if months > scale.steps * 3 {
                diags.push(Diagnostic::new(
                    scope.to_string(),
                    format!(
                        "deprivation of {months} months exceeds the scale; clamped to the last step"
                    ),
                ));
            }
            PunishSlot::Level(scale.step_for_months(months))
        } else if fine.is_some() {
            PunishSlot::FineOnly
        } else {
            diags.push(Diagnostic::new(
                scope.to_string(),
                "punishment vector has no recognized component; assigned the reserved slot",
            ));
            PunishSlot::Unspecified
        }
    };
    BucketAssignment { slot, fine }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bucket(v: &PunishmentVector) -> BucketAssignment {
        let mut diags = Vec::new();
        bucket_punishment(
            v,
            &PunishmentScale::default(),
            &FineBuckets::default(),
            DeprivationMode::Sum,
            "test",
            &mut diags,
        )
    }

    #[test]
    fn default_scale_has_eighty_levels() {
        assert_eq!(PunishmentScale::default().num_levels(), 80);
    }

    #[test]
    fn exemption_takes_level_zero() {
        let a = bucket(&PunishmentVector::exemption_only());
        assert_eq!(a.slot, PunishSlot::Level(0));
        assert_eq!(a.fine, None);
    }

    #[test]
    fn thirty_six_months_is_step_twelve() {
        let v = PunishmentVector {
            fixed_term_months: 36,
            ..Default::default()
        };
        assert_eq!(bucket(&v).slot, PunishSlot::Level(12));
    }

    #[test]
    fn death_takes_the_top_level() {
        let v = PunishmentVector {
            death: true,
            ..Default::default()
        };
        assert_eq!(bucket(&v).slot, PunishSlot::Level(79));
    }

    #[test]
    fn death_with_probation_is_its_own_level() {
        let v = PunishmentVector {
            death_with_probation: true,
            ..Default::default()
        };
        assert_eq!(bucket(&v).slot, PunishSlot::Level(78));
    }

    #[test]
    fn fine_only_takes_the_reserved_slot_and_a_fine_bucket() {
        let v = PunishmentVector {
            fine_yuan: 2_000,
            ..Default::default()
        };
        let a = bucket(&v);
        assert_eq!(a.slot, PunishSlot::FineOnly);
        assert_eq!(a.fine, Some(1));
    }

    #[test]
    fn empty_vector_is_unspecified_with_diagnostic() {
        let mut diags = Vec::new();
        let a = bucket_punishment(
            &PunishmentVector::default(),
            &PunishmentScale::default(),
            &FineBuckets::default(),
            DeprivationMode::Sum,
            "test",
            &mut diags,
        );
        assert_eq!(a.slot, PunishSlot::Unspecified);
        assert_eq!(diags.len(), 1);
    }

    #[test]
    fn probation_does_not_shift_the_bucket() {
        let with = PunishmentVector {
            fixed_term_months: 12,
            probation_months: 24,
            ..Default::default()
        };
        let without = PunishmentVector {
            fixed_term_months: 12,
            ..Default::default()
        };
        assert_eq!(bucket(&with).slot, bucket(&without).slot);
    }

    #[test]
    fn bucketing_is_monotone_over_the_step_region() {
        let scale = PunishmentScale::default();
        let mut last = 0;
        for months in 1..=240 {
            let step = scale.step_for_months(months);
            assert!(step >= last, "step regressed at {months} months");
            last = step;
        }
    }

    #[test]
    fn money_buckets_follow_the_edges() {
        let axis = DamageAxisConfig::default();
        assert_eq!(axis.money_bucket("x", 1_000), 0);
        assert_eq!(axis.money_bucket("x", 1_001), 1);
        assert_eq!(axis.money_bucket("x", 100_000), 3);
        assert_eq!(axis.money_bucket("x", 100_001), 4);
    }

    #[test]
    fn level_labels_round_trip() {
        let scale = PunishmentScale::default();
        for level in [0, 1, 12, 76, 77, 78, 79] {
            let label = scale.level_label(level);
            if level == 0 || level > 76 {
                assert_eq!(scale.parse_level_label(&label), Some(level));
            }
        }
        assert_eq!(scale.parse_level_label("months:36"), Some(12));
        assert_eq!(scale.parse_level_label("level:5"), Some(5));
        assert_eq!(scale.parse_level_label("level:80"), None);
    }
}
