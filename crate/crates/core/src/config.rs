//! The aggregated engine configuration. Defaults are compiled in; the
//! companion crate overrides sections from a config file.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use alloc::vec;

use serde::{Deserialize, Serialize};

use crate::action::ActionConfig;
use crate::entity::{CrimeTable, InjuryLexicon, MonetaryCues, PunishmentKeywordTable};
use crate::ingest::CuePhraseTable;
use crate::model::{ConstraintTable, FactClass};
use crate::scale::ScaleConfig;

/// Which sentence classes are scanned for damages. When a record has no
/// sentence in any listed class, the fallback classes are scanned instead so
/// damages stated only in the prosecutor's account still surface.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DamageScanConfig {
    pub classes: Vec<FactClass>,
    pub fallback_classes: Vec<FactClass>,
    pub cues: MonetaryCues,
}

impl Default for DamageScanConfig {
    fn default() -> Self {
        DamageScanConfig {
            classes: vec![FactClass::CourtFacts],
            fallback_classes: vec![FactClass::ProsecutorArgument],
            cues: MonetaryCues::default(),
        }
    }
}

/// Query-pipeline knobs: the forgiveness synonym set with its negation
/// lexicon, the frequency filter and the default top-k.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QueryConfig {
    pub forgiveness_terms: Vec<String>,
    pub negation_lexicon: Vec<String>,
    pub filter_fraction: f64,
    pub top_k: usize,
}

impl Default for QueryConfig {
    fn default() -> Self {
        QueryConfig {
            forgiveness_terms: vec!["谅解".to_string(), "原谅".to_string()],
            negation_lexicon: ["未", "不", "没", "没有", "拒绝"]
                .iter()
                .map(|s| s.to_string())
                .collect(),
            filter_fraction: 0.05,
            top_k: 20,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct EngineConfig {
    pub cues: CuePhraseTable,
    pub injury: InjuryLexicon,
    pub crimes: CrimeTable,
    pub punishments: PunishmentKeywordTable,
    pub constraints: ConstraintTable,
    pub action: ActionConfig,
    pub damage_scan: DamageScanConfig,
    pub scale: ScaleConfig,
    pub query: QueryConfig,
}
