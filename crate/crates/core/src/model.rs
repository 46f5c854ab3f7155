//! Domain types for the record relation and every extracted feature.
//!
//! One [`JddRecord`] is one row of the heterogeneous relation: case metadata,
//! parties, classified fact sentences and the features pulled out of them.
//! The record is the unit every other module consumes and produces.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use alloc::{format, vec};

use serde::{Deserialize, Serialize};

use crate::parse::{ConstituencyTree, DependencyGraph};
use crate::scale::{BucketAssignment, DamageCoord, ScaleConfig};
use crate::Diagnostic;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseType {
    Criminal,
    Administrative,
    Civil,
    Other,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PartyRole {
    Plaintiff,
    Prosecutor,
    Defendant,
    Counsel,
}

/// Nested key-value data attached to a party, e.g. prior law-enforcement
/// actions with their durations. Kept as a tree so nothing stated in the
/// source document is lost.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AttrValue {
    Text(String),
    Number(i64),
    List(Vec<AttrValue>),
    Map(BTreeMap<String, AttrValue>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Party {
    pub role: PartyRole,
    pub name: String,
    #[serde(default)]
    pub attributes: BTreeMap<String, AttrValue>,
}

/// The eight discourse classes of fact sentences, plus the explicit
/// "no class assigned" label so classification stays total.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FactClass {
    CaseBackground,
    ProsecutorArgument,
    ProsecutorEvidence,
    ProsecutorOpinion,
    DefendantArgument,
    DefendantEvidence,
    CourtFacts,
    CourtEvidence,
    Unclassified,
}

impl FactClass {
    pub const ALL_CLASSIFIED: [FactClass; 8] = [
        FactClass::CaseBackground,
        FactClass::ProsecutorArgument,
        FactClass::ProsecutorEvidence,
        FactClass::ProsecutorOpinion,
        FactClass::DefendantArgument,
        FactClass::DefendantEvidence,
        FactClass::CourtFacts,
        FactClass::CourtEvidence,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FactClass::CaseBackground => "case_background",
            FactClass::ProsecutorArgument => "prosecutor_argument",
            FactClass::ProsecutorEvidence => "prosecutor_evidence",
            FactClass::ProsecutorOpinion => "prosecutor_opinion",
            FactClass::DefendantArgument => "defendant_argument",
            FactClass::DefendantEvidence => "defendant_evidence",
            FactClass::CourtFacts => "court_facts",
            FactClass::CourtEvidence => "court_evidence",
            FactClass::Unclassified => "unclassified",
        }
    }

    pub fn parse(name: &str) -> Option<FactClass> {
        Some(match name {
            "case_background" => FactClass::CaseBackground,
            "prosecutor_argument" => FactClass::ProsecutorArgument,
            "prosecutor_evidence" => FactClass::ProsecutorEvidence,
            "prosecutor_opinion" => FactClass::ProsecutorOpinion,
            "defendant_argument" => FactClass::DefendantArgument,
            "defendant_evidence" => FactClass::DefendantEvidence,
            "court_facts" => FactClass::CourtFacts,
            "court_evidence" => FactClass::CourtEvidence,
            "unclassified" => FactClass::Unclassified,
            _ => return None,
        })
    }
}

/// A fact sentence with its clause segmentation, discourse class and the
/// externally supplied parses (when the sentence has any).
///
/// Invariant: concatenating `douduan` reconstructs `text` exactly; the
/// delimiter stays attached to the clause it terminates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifiedSentence {
    pub text: String,
    #[serde(default)]
    pub douduan: Vec<String>,
    pub fact_class: FactClass,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dependency_parse: Option<DependencyGraph>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constituency_parse: Option<ConstituencyTree>,
}

impl ClassifiedSentence {
    pub fn bare(text: impl Into<String>) -> Self {
        Self {
            text: text.into(),
            douduan: Vec::new(),
            fact_class: FactClass::Unclassified,
            dependency_parse: None,
            constituency_parse: None,
        }
    }

    /// Checks the lossless-segmentation invariant.
    pub fn segmentation_is_lossless(&self) -> bool {
        let joined: String = self.douduan.concat();
        joined == self.text
    }
}

/// Where an action was found: (sentence index, clause index) within the
/// record's fact sentences.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SourceRef {
    pub sentence: usize,
    pub douduan: usize,
}

/// The action schema extracted from one clause:
/// `[subject, action, object, action_modifier]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionRecord {
    pub subject: Vec<String>,
    /// Trigger verb lemma; surface form when the lemma column is empty.
    pub trigger: String,
    pub object: Vec<String>,
    pub action_modifier: Vec<String>,
    pub source: SourceRef,
    /// True iff `subject` was copied from an earlier clause (or there was
    /// nothing to copy and the list is empty).
    pub subject_inherited: bool,
}

/// The five statutory injury grades plus death, ordered by severity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InjuryLevel {
    Slight,
    MinorSecond,
    MinorFirst,
    SeriousSecond,
    SeriousFirst,
    Death,
}

impl InjuryLevel {
    pub const ALL: [InjuryLevel; 6] = [
        InjuryLevel::Slight,
        InjuryLevel::MinorSecond,
        InjuryLevel::MinorFirst,
        InjuryLevel::SeriousSecond,
        InjuryLevel::SeriousFirst,
        InjuryLevel::Death,
    ];

    pub fn name(self) -> &'static str {
        match self {
            InjuryLevel::Slight => "slight",
            InjuryLevel::MinorSecond => "minor_second",
            InjuryLevel::MinorFirst => "minor_first",
            InjuryLevel::SeriousSecond => "serious_second",
            InjuryLevel::SeriousFirst => "serious_first",
            InjuryLevel::Death => "death",
        }
    }

    pub fn parse(name: &str) -> Option<InjuryLevel> {
        Self::ALL.into_iter().find(|l| l.name() == name)
    }
}

/// A damage observation. The enum makes "exactly one of amount / level is
/// populated, matching the kind" true by construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DamageValue {
    Monetary { amount_yuan: u64 },
    Injury { injury_level: InjuryLevel },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChargeStage {
    Charged,
    Convicted,
}

/// A crime charge as written plus its normalized form. `normalized` is false
/// when the raw name was not found in the crime table; `standard_name` then
/// carries the raw string unchanged.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrimeCharge {
    pub raw_name: String,
    pub standard_name: String,
    pub stage: ChargeStage,
    pub normalized: bool,
}

/// Confiscation is stated both as a bare order and with an amount; both are
/// kept losslessly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Confiscation {
    None,
    Declared,
    Amount(u64),
}

impl Default for Confiscation {
    fn default() -> Self {
        Confiscation::None
    }
}

impl Confiscation {
    pub fn is_set(self) -> bool {
        !matches!(self, Confiscation::None)
    }
}

/// The punishment vector for one convicted crime. Binary components are
/// booleans, quantified components carry months or yuan.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PunishmentVector {
    #[serde(default)]
    pub exemption: bool,
    #[serde(default)]
    pub public_surveillance_months: u32,
    #[serde(default)]
    pub detention_months: u32,
    #[serde(default)]
    pub fixed_term_months: u32,
    #[serde(default)]
    pub probation_months: u32,
    #[serde(default)]
    pub fine_yuan: u64,
    #[serde(default)]
    pub political_rights_deprivation_months: u32,
    #[serde(default)]
    pub confiscation: Confiscation,
    #[serde(default)]
    pub life_imprisonment: bool,
    #[serde(default)]
    pub death: bool,
    #[serde(default)]
    pub death_with_probation: bool,
    #[serde(default)]
    pub political_rights_deprivation_for_life: bool,
}

impl PunishmentVector {
    pub fn exemption_only() -> Self {
        PunishmentVector {
            exemption: true,
            ..Default::default()
        }
    }

    /// True when every component is zero / false / none.
    pub fn is_empty(&self) -> bool {
        Component::ALL.iter().all(|c| !c.is_set_in(self))
    }
}

/// The addressable components of a punishment vector, used by the
/// configurable constraint table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Component {
    Exemption,
    PublicSurveillance,
    Detention,
    FixedTerm,
    Probation,
    Fine,
    PoliticalRightsDeprivation,
    Confiscation,
    LifeImprisonment,
    Death,
    DeathWithProbation,
    PoliticalRightsDeprivationForLife,
}

impl Component {
    pub const ALL: [Component; 12] = [
        Component::Exemption,
        Component::PublicSurveillance,
        Component::Detention,
        Component::FixedTerm,
        Component::Probation,
        Component::Fine,
        Component::PoliticalRightsDeprivation,
        Component::Confiscation,
        Component::LifeImprisonment,
        Component::Death,
        Component::DeathWithProbation,
        Component::PoliticalRightsDeprivationForLife,
    ];

    pub fn is_set_in(self, v: &PunishmentVector) -> bool {
        match self {
            Component::Exemption => v.exemption,
            Component::PublicSurveillance => v.public_surveillance_months > 0,
            Component::Detention => v.detention_months > 0,
            Component::FixedTerm => v.fixed_term_months > 0,
            Component::Probation => v.probation_months > 0,
            Component::Fine => v.fine_yuan > 0,
            Component::PoliticalRightsDeprivation => v.political_rights_deprivation_months > 0,
            Component::Confiscation => v.confiscation.is_set(),
            Component::LifeImprisonment => v.life_imprisonment,
            Component::Death => v.death,
            Component::DeathWithProbation => v.death_with_probation,
            Component::PoliticalRightsDeprivationForLife => {
                v.political_rights_deprivation_for_life
            }
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Component::Exemption => "exemption",
            Component::PublicSurveillance => "public_surveillance",
            Component::Detention => "detention",
            Component::FixedTerm => "fixed_term",
            Component::Probation => "probation",
            Component::Fine => "fine",
            Component::PoliticalRightsDeprivation => "political_rights_deprivation",
            Component::Confiscation => "confiscation",
            Component::LifeImprisonment => "life_imprisonment",
            Component::Death => "death",
            Component::DeathWithProbation => "death_with_probation",
            Component::PoliticalRightsDeprivationForLife => {
                "political_rights_deprivation_for_life"
            }
        }
    }

    pub fn parse(name: &str) -> Option<Component> {
        Self::ALL.into_iter().find(|c| c.name() == name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstraintKind {
    /// Both components set at once is a violation.
    MutualExclusion { a: Component, b: Component },
    /// If this component is set, no other component may be.
    Exclusive { component: Component },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Constraint {
    pub name: String,
    pub kind: ConstraintKind,
}

/// The active integrity-constraint table for punishment vectors.
/// Configurable; the default ships the known impossible combinations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstraintTable {
    pub constraints: Vec<Constraint>,
}

impl Default for ConstraintTable {
    fn default() -> Self {
        let mutex = |name: &str, a, b| Constraint {
            name: name.to_string(),
            kind: ConstraintKind::MutualExclusion { a, b },
        };
        ConstraintTable {
            constraints: vec![
                mutex(
                    "fixed-term\u{d7}life",
                    Component::FixedTerm,
                    Component::LifeImprisonment,
                ),
                Constraint {
                    name: "exemption-exclusivity".to_string(),
                    kind: ConstraintKind::Exclusive {
                        component: Component::Exemption,
                    },
                },
                mutex(
                    "death\u{d7}life",
                    Component::Death,
                    Component::LifeImprisonment,
                ),
                mutex(
                    "death\u{d7}fixed-term",
                    Component::Death,
                    Component::FixedTerm,
                ),
                mutex(
                    "death-with-probation\u{d7}death",
                    Component::DeathWithProbation,
                    Component::Death,
                ),
            ],
        }
    }
}

impl ConstraintTable {
    /// Returns the names of every violated constraint; empty means the
    /// vector is valid. Violations are data, not errors.
    pub fn validate(&self, v: &PunishmentVector) -> Vec<String> {
        let mut violated = Vec::new();
        for c in &self.constraints {
            let broken = match &c.kind {
                ConstraintKind::MutualExclusion { a, b } => a.is_set_in(v) && b.is_set_in(v),
                ConstraintKind::Exclusive { component } => {
                    component.is_set_in(v)
                        && Component::ALL
                            .iter()
                            .any(|other| other != component && other.is_set_in(v))
                }
            };
            if broken {
                violated.push(c.name.clone());
            }
        }
        violated
    }
}

/// Validates a punishment vector against the active constraint table.
pub fn validate_punishment(v: &PunishmentVector, table: &ConstraintTable) -> Vec<String> {
    table.validate(v)
}

/// One row of the record relation: a judgment document with its metadata,
/// parties, classified fact sentences and extracted features.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JddRecord {
    pub case_id: String,
    pub case_type: CaseType,
    /// Normalized crime-name string; the nominal partition key. Multi-crime
    /// records additionally partition per convicted crime.
    #[serde(default)]
    pub crime_type: String,
    #[serde(default)]
    pub parties: Vec<Party>,
    #[serde(default)]
    pub fact_sentences: Vec<ClassifiedSentence>,
    /// Decision-section sentences, the source for convictions and
    /// punishments.
    #[serde(default)]
    pub decision: Vec<String>,
    #[serde(default)]
    pub actions: Vec<ActionRecord>,
    #[serde(default)]
    pub damages: Vec<DamageValue>,
    #[serde(default)]
    pub charges: Vec<CrimeCharge>,
    /// One (crime name, punishment vector) pair per convicted crime.
    #[serde(default)]
    pub punishments: Vec<(String, PunishmentVector)>,
}

impl JddRecord {
    pub fn new(case_id: impl Into<String>, case_type: CaseType) -> Self {
        JddRecord {
            case_id: case_id.into(),
            case_type,
            crime_type: String::new(),
            parties: Vec::new(),
            fact_sentences: Vec::new(),
            decision: Vec::new(),
            actions: Vec::new(),
            damages: Vec::new(),
            charges: Vec::new(),
            punishments: Vec::new(),
        }
    }

    /// Record-level invariant checks, reported as diagnostics.
    pub fn check_invariants(&self, diags: &mut Vec<Diagnostic>) {
        if self.case_id.is_empty() {
            diags.push(Diagnostic::new("record", "empty case_id"));
        }
        for party in &self.parties {
            if party.name.is_empty() {
                diags.push(Diagnostic::new(
                    self.case_id.clone(),
                    "party with empty name",
                ));
            }
        }
        for sentence in &self.fact_sentences {
            if !sentence.douduan.is_empty() && !sentence.segmentation_is_lossless() {
                diags.push(Diagnostic::new(
                    self.case_id.clone(),
                    "douduan segmentation does not reconstruct sentence text",
                ));
            }
        }
        for (crime, _) in &self.punishments {
            let matched = self
                .charges
                .iter()
                .any(|c| &c.standard_name == crime || &c.raw_name == crime);
            if !matched {
                diags.push(Diagnostic::new(
                    self.case_id.clone(),
                    format!("unmatched conviction: {crime} not among charges"),
                ));
            }
        }
    }
}

/// One (crime, action, damage, punishment-bucket) coordinate tuple a record
/// contributes to the distribution matrix.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FeatureTuple {
    pub crime: String,
    pub action: String,
    pub damage: DamageCoord,
    pub punishment: BucketAssignment,
}

/// Maps a fully extracted record onto matrix coordinates: the Cartesian
/// pairing of its actions × damages × bucketed punishments, one partition
/// per convicted crime. Records with no extracted damage land on the
/// reserved no-damage coordinate so they are never dropped.
pub fn record_to_feature_set(
    record: &JddRecord,
    scale: &ScaleConfig,
    diags: &mut Vec<Diagnostic>,
) -> Vec<FeatureTuple> {
    if record.punishments.is_empty() {
        diags.push(Diagnostic::new(
            record.case_id.clone(),
            "no convicted crime; record contributes no feature tuples",
        ));
        return Vec::new();
    }
    let mut tuples = Vec::new();
    for (crime, vector) in &record.punishments {
        let assignment = scale.bucket_punishment_for(&record.case_id, vector, diags);
        let damages: Vec<DamageCoord> = if record.damages.is_empty() {
            vec![DamageCoord::NoDamage]
        } else {
            record
                .damages
                .iter()
                .map(|d| scale.damage_coord(crime, d))
                .collect()
        };
        for action in &record.actions {
            for damage in &damages {
                tuples.push(FeatureTuple {
                    crime: crime.clone(),
                    action: action.trigger.clone(),
                    damage: *damage,
                    punishment: assignment,
                });
            }
        }
    }
    tuples
}
