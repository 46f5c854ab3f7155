//! Engine configuration and query specifications in the key-value config
//! format. Defaults are compiled into the core; a section present in a file
//! replaces the corresponding default wholesale.

use std::path::Path;

use jdd_core::action::InheritanceWindow;
use jdd_core::config::EngineConfig;
use jdd_core::entity::PunishmentKeywordKind;
use jdd_core::ingest::FallbackPolicy;
use jdd_core::kb::AxisId;
use jdd_core::model::{Component, Constraint, ConstraintKind, FactClass};
use jdd_core::scale::{DamageCoord, DeprivationMode, PunishCellCoord, PunishSlot};
use thiserror::Error;

use crate::kvconf::{self, KvDocument, Section};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {0}: {1}")]
    Io(String, std::io::Error),
    #[error("{0}")]
    Format(#[from] kvconf::KvError),
    #[error("section [{section}]: {message}")]
    Bad { section: String, message: String },
}

fn bad(section: &str, message: impl Into<String>) -> ConfigError {
    ConfigError::Bad {
        section: section.to_string(),
        message: message.into(),
    }
}

fn parse_list(value: &str) -> Vec<String> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(String::from)
        .collect()
}

fn parse_u64_list(section: &str, value: &str) -> Result<Vec<u64>, ConfigError> {
    parse_list(value)
        .iter()
        .map(|s| {
            s.parse::<u64>()
                .map_err(|_| bad(section, format!("bad number {s:?}")))
        })
        .collect()
}

/// Loads an engine config file and applies it over the defaults.
pub fn load_engine_config(path: &Path) -> Result<EngineConfig, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError::Io(path.display().to_string(), e))?;
    engine_config_from_str(&text)
}

pub fn engine_config_from_str(text: &str) -> Result<EngineConfig, ConfigError> {
    let doc = kvconf::parse(text)?;
    let mut config = EngineConfig::default();

    if let Some(section) = doc.section("cues") {
        let mut entries = Vec::new();
        let mut fallback = FallbackPolicy::InheritPrevious;
        let mut cueless = Vec::new();
        for (key, value) in &section.entries {
            match key.as_str() {
                "fallback" => {
                    fallback = match value.as_str() {
                        "inherit_previous" => FallbackPolicy::InheritPrevious,
                        "unclassified" => FallbackPolicy::Unclassified,
                        other => return Err(bad("cues", format!("bad fallback {other:?}"))),
                    }
                }
                "cueless" => {
                    for name in parse_list(value) {
                        let class = FactClass::parse(&name)
                            .ok_or_else(|| bad("cues", format!("unknown class {name:?}")))?;
                        cueless.push(class);
                    }
                }
                cue => {
                    let class = FactClass::parse(value)
                        .ok_or_else(|| bad("cues", format!("unknown class {value:?}")))?;
                    entries.push((cue.to_string(), class));
                }
            }
        }
        config.cues.entries = entries;
        config.cues.fallback = fallback;
        config.cues.cueless = cueless;
        config
            .cues
            .validate()
            .map_err(|e| bad("cues", e.to_string()))?;
    }

    if let Some(section) = doc.section("injury") {
        let mut entries = Vec::new();
        for (keyword, level) in &section.entries {
            let level = jdd_core::model::InjuryLevel::parse(level)
                .ok_or_else(|| bad("injury", format!("unknown level {level:?}")))?;
            entries.push((keyword.clone(), level));
        }
        config.injury.entries = entries;
    }

    if let Some(section) = doc.section("crimes") {
        let mut standard = Vec::new();
        let mut aliases = Vec::new();
        for (key, value) in &section.entries {
            match key.as_str() {
                "name" => standard.push(value.clone()),
                "alias" => {
                    let Some((raw, std_name)) = value.split_once("=>") else {
                        return Err(bad("crimes", format!("alias needs RAW => STANDARD: {value:?}")));
                    };
                    aliases.push((raw.trim().to_string(), std_name.trim().to_string()));
                }
                other => return Err(bad("crimes", format!("unknown key {other:?}"))),
            }
        }
        config.crimes.standard = standard;
        config.crimes.aliases = aliases;
        config
            .crimes
            .validate()
            .map_err(|e| bad("crimes", e.to_string()))?;
    }

    if let Some(section) = doc.section("punishments") {
        let mut entries = Vec::new();
        for (keyword, kind) in &section.entries {
            match keyword.as_str() {
                "combined_markers" => {
                    config.punishments.combined_sentence_markers = parse_list(kind);
                    continue;
                }
                "death_probation_marker" => {
                    config.punishments.death_probation_marker = kind.clone();
                    continue;
                }
                _ => {}
            }
            let kind = PunishmentKeywordKind::parse(kind)
                .ok_or_else(|| bad("punishments", format!("unknown component {kind:?}")))?;
            entries.push((keyword.clone(), kind));
        }
        if !entries.is_empty() {
            config.punishments.entries = entries;
        }
    }

    if let Some(section) = doc.section("constraints") {
        let mut constraints = Vec::new();
        for (name, value) in &section.entries {
            let Some((kind, components)) = value.split_once(':') else {
                return Err(bad("constraints", format!("need kind:components, got {value:?}")));
            };
            let components: Vec<&str> = components.split(',').map(str::trim).collect();
            let component = |s: &str| {
                Component::parse(s)
                    .ok_or_else(|| bad("constraints", format!("unknown component {s:?}")))
            };
            let kind = match (kind.trim(), components.as_slice()) {
                ("mutex", [a, b]) => ConstraintKind::MutualExclusion {
                    a: component(a)?,
                    b: component(b)?,
                },
                ("exclusive", [c]) => ConstraintKind::Exclusive {
                    component: component(c)?,
                },
                _ => return Err(bad("constraints", format!("bad constraint {value:?}"))),
            };
            constraints.push(Constraint {
                name: name.clone(),
                kind,
            });
        }
        config.constraints.constraints = constraints;
    }

    if let Some(section) = doc.section("action") {
        if let Some(value) = section.first("exclude") {
            config.action.excluded_modifiers = parse_list(value);
        }
        if let Some(value) = section.first("inheritance_window") {
            config.action.inheritance_window = match value {
                "same_fact_class" => InheritanceWindow::SameFactClass,
                "document" => InheritanceWindow::Document,
                other => return Err(bad("action", format!("bad window {other:?}"))),
            };
        }
    }

    if let Some(section) = doc.section("damage") {
        if let Some(value) = section.first("money_edges") {
            config.scale.damage_axis.money_edges = parse_u64_list("damage", value)?;
        }
        for value in section.values("crime_edges") {
            let Some((crime, edges)) = value.split_once("=>") else {
                return Err(bad("damage", format!("crime_edges needs CRIME => list: {value:?}")));
            };
            config.scale.damage_axis.per_crime_edges.insert(
                crime.trim().to_string(),
                parse_u64_list("damage", edges)?,
            );
        }
        if let Some(value) = section.first("total_cues") {
            config.damage_scan.cues.total_cues = parse_list(value);
        }
        let parse_classes = |value: &str| -> Result<Vec<FactClass>, ConfigError> {
            parse_list(value)
                .iter()
                .map(|name| {
                    FactClass::parse(name)
                        .ok_or_else(|| bad("damage", format!("unknown class {name:?}")))
                })
                .collect()
        };
        if let Some(value) = section.first("classes") {
            config.damage_scan.classes = parse_classes(value)?;
        }
        if let Some(value) = section.first("fallback_classes") {
            config.damage_scan.fallback_classes = parse_classes(value)?;
        }
        config
            .scale
            .damage_axis
            .validate()
            .map_err(|e| bad("damage", e.to_string()))?;
    }

    if let Some(section) = doc.section("scale") {
        if let Some(value) = section.first("steps") {
            config.scale.scale.steps = value
                .parse()
                .map_err(|_| bad("scale", format!("bad steps {value:?}")))?;
        }
        if let Some(value) = section.first("fine_edges") {
            config.scale.fine_buckets.edges = parse_u64_list("scale", value)?;
        }
        if let Some(value) = section.first("deprivation") {
            config.scale.deprivation = match value {
                "sum" => DeprivationMode::Sum,
                "max" => DeprivationMode::Max,
                other => return Err(bad("scale", format!("bad deprivation mode {other:?}"))),
            };
        }
    }

    if let Some(section) = doc.section("query") {
        if let Some(value) = section.first("forgiveness") {
            config.query.forgiveness_terms = parse_list(value);
        }
        if let Some(value) = section.first("negation") {
            config.query.negation_lexicon = parse_list(value);
        }
        if let Some(value) = section.first("filter_fraction") {
            config.query.filter_fraction = value
                .parse()
                .map_err(|_| bad("query", format!("bad filter_fraction {value:?}")))?;
        }
        if let Some(value) = section.first("top_k") {
            config.query.top_k = value
                .parse()
                .map_err(|_| bad("query", format!("bad top_k {value:?}")))?;
        }
    }

    Ok(config)
}

/// The pipelines and primitives a query spec can name.
#[derive(Debug, Clone, PartialEq)]
pub enum QueryKind {
    Question1 {
        splitter: SplitterKind,
    },
    Question2a,
    Question2b,
    Marginals {
        over: Vec<AxisId>,
        fixing: Vec<(AxisId, String)>,
        distinct: bool,
    },
    GetCases {
        action: Option<String>,
        damage: Option<DamageCoord>,
        punishment: Option<PunishCellCoordSpec>,
    },
    ResolvePath {
        path: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitterKind {
    DefenseArgument,
    Forgiveness,
}

/// A punishment coordinate as written in a spec, resolved against the scale
/// at query time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PunishCellCoordSpec {
    Label(String),
    Fine(u32),
}

impl PunishCellCoordSpec {
    pub fn resolve(
        &self,
        scale: &jdd_core::scale::PunishmentScale,
    ) -> Option<PunishCellCoord> {
        match self {
            PunishCellCoordSpec::Fine(bucket) => Some(PunishCellCoord::Fine(*bucket)),
            PunishCellCoordSpec::Label(label) => match label.as_str() {
                "fine_only" => Some(PunishCellCoord::Slot(PunishSlot::FineOnly)),
                "unspecified" => Some(PunishCellCoord::Slot(PunishSlot::Unspecified)),
                other => scale
                    .parse_level_label(other)
                    .map(|l| PunishCellCoord::Slot(PunishSlot::Level(l))),
            },
        }
    }
}

/// A fully resolved query specification.
#[derive(Debug, Clone, PartialEq)]
pub struct QuerySpec {
    pub partition: String,
    pub kind: QueryKind,
    pub k: Option<usize>,
    pub filter_fraction: Option<f64>,
    pub records: Option<String>,
}

pub fn load_query_spec(path: &Path) -> Result<QuerySpec, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError::Io(path.display().to_string(), e))?;
    query_spec_from_str(&text)
}

pub fn query_spec_from_str(text: &str) -> Result<QuerySpec, ConfigError> {
    let doc: KvDocument = kvconf::parse(text)?;
    let Some(section) = doc.section("query") else {
        return Err(bad("query", "missing [query] section"));
    };
    query_spec_from_section(section)
}

pub fn query_spec_from_section(section: &Section) -> Result<QuerySpec, ConfigError> {
    let get = |key: &str| section.first(key).map(str::to_string);
    let partition = get("partition").ok_or_else(|| bad("query", "missing partition"))?;
    let pipeline = get("pipeline").ok_or_else(|| bad("query", "missing pipeline"))?;
    let kind = match pipeline.as_str() {
        "question1" => {
            let splitter = match get("splitter").as_deref() {
                Some("defense_argument") | None => SplitterKind::DefenseArgument,
                Some("forgiveness") => SplitterKind::Forgiveness,
                Some(other) => return Err(bad("query", format!("unknown splitter {other:?}"))),
            };
            QueryKind::Question1 { splitter }
        }
        "question2a" => QueryKind::Question2a,
        "question2b" => QueryKind::Question2b,
        "marginals" => {
            let over = get("axis").ok_or_else(|| bad("query", "marginals need axis"))?;
            let over: Result<Vec<AxisId>, ConfigError> = parse_list(&over)
                .iter()
                .map(|name| {
                    AxisId::parse(name)
                        .ok_or_else(|| bad("query", format!("unknown axis name {name:?}")))
                })
                .collect();
            let mut fixing = Vec::new();
            for value in section.values("fixing") {
                let Some((axis, coord)) = value.split_once('=') else {
                    return Err(bad("query", format!("fixing needs axis=coordinate: {value:?}")));
                };
                let axis = AxisId::parse(axis.trim())
                    .ok_or_else(|| bad("query", format!("unknown axis name {axis:?}")))?;
                fixing.push((axis, coord.trim().to_string()));
            }
            QueryKind::Marginals {
                over: over?,
                fixing,
                distinct: get("count").as_deref() == Some("distinct_cases"),
            }
        }
        "get_cases" => {
            let damage = match get("damage") {
                Some(label) => Some(DamageCoord::parse_label(&label).ok_or_else(|| {
                    bad("query", format!("bad damage coordinate {label:?}"))
                })?),
                None => None,
            };
            let punishment = match (get("punishment"), get("fine_bucket")) {
                (Some(_), Some(_)) => {
                    return Err(bad("query", "give punishment or fine_bucket, not both"))
                }
                (Some(label), None) => Some(PunishCellCoordSpec::Label(label)),
                (None, Some(bucket)) => Some(PunishCellCoordSpec::Fine(
                    bucket
                        .parse()
                        .map_err(|_| bad("query", format!("bad fine bucket {bucket:?}")))?,
                )),
                (None, None) => None,
            };
            QueryKind::GetCases {
                action: get("action"),
                damage,
                punishment,
            }
        }
        "resolve" => QueryKind::ResolvePath {
            path: get("path").ok_or_else(|| bad("query", "resolve needs path"))?,
        },
        other => return Err(bad("query", format!("unknown pipeline {other:?}"))),
    };
    let k = match get("k") {
        Some(v) => Some(
            v.parse()
                .map_err(|_| bad("query", format!("bad k {v:?}")))?,
        ),
        None => None,
    };
    let filter_fraction = match get("filter_fraction") {
        Some(v) => Some(
            v.parse()
                .map_err(|_| bad("query", format!("bad filter_fraction {v:?}")))?,
        ),
        None => None,
    };
    Ok(QuerySpec {
        partition,
        kind,
        k,
        filter_fraction,
        records: get("records"),
    })
}
