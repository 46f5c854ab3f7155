//! Extraction of damages, crime charges and punishment vectors from clause
//! text: keyword matching for injury levels, numeral scanning for monetary
//! values, a crime-name table with aliases, and the punishment keyword table
//! organised around the statutory principal and supplementary punishments.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use alloc::{format, vec};

use serde::{Deserialize, Serialize};

use crate::ingest::segment_douduan;
use crate::model::{
    ChargeStage, Confiscation, ConstraintTable, CrimeCharge, DamageValue, FactClass, InjuryLevel,
    JddRecord, PunishmentVector,
};
use crate::numeral::{extract_amounts, scan_duration_months};
use crate::Diagnostic;

/// Keyword lexicon for the statutory injury grades. Bare 轻伤/重伤 map to
/// the second (lighter) degree of their grade; the most severe match in a
/// clause wins, so the degree-qualified keywords dominate when present.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InjuryLexicon {
    pub entries: Vec<(String, InjuryLevel)>,
}

impl Default for InjuryLexicon {
    fn default() -> Self {
        let e = |s: &str, l| (s.to_string(), l);
        InjuryLexicon {
            entries: vec![
                e("轻微伤", InjuryLevel::Slight),
                e("轻伤一级", InjuryLevel::MinorFirst),
                e("轻伤二级", InjuryLevel::MinorSecond),
                e("轻伤", InjuryLevel::MinorSecond),
                e("重伤一级", InjuryLevel::SeriousFirst),
                e("重伤二级", InjuryLevel::SeriousSecond),
                e("重伤", InjuryLevel::SeriousSecond),
                e("死亡", InjuryLevel::Death),
            ],
        }
    }
}

/// Keyword match against the injury lexicon; when several levels appear in
/// one clause the most severe is taken.
pub fn extract_injury_level(douduan: &str, lexicon: &InjuryLexicon) -> Option<DamageValue> {
    lexicon
        .entries
        .iter()
        .filter(|(keyword, _)| douduan.contains(keyword.as_str()))
        .map(|(_, level)| *level)
        .max()
        .map(|injury_level| DamageValue::Injury { injury_level })
}

/// Cues marking a stated total, e.g. 共计. When a clause carries several
/// amounts, the one following a total cue wins; otherwise the maximum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonetaryCues {
    pub total_cues: Vec<String>,
}

impl Default for MonetaryCues {
    fn default() -> Self {
        MonetaryCues {
            total_cues: vec!["共计".to_string(), "总计".to_string(), "价值".to_string()],
        }
    }
}

/// Recognizes one monetary damage per clause.
pub fn extract_monetary_damage(
    douduan: &str,
    cues: &MonetaryCues,
    scope: &str,
    diags: &mut Vec<Diagnostic>,
) -> Option<DamageValue> {
    let (amounts, malformed) = extract_amounts(douduan);
    for bad in malformed {
        diags.push(Diagnostic::new(
            scope.to_string(),
            format!("unparseable currency numeral {bad:?}"),
        ));
    }
    if amounts.is_empty() {
        return None;
    }
    let chosen = if amounts.len() == 1 {
        amounts[0].yuan
    } else {
        let cue_pos = cues
            .total_cues
            .iter()
            .filter_map(|cue| douduan.find(cue.as_str()))
            .min();
        match cue_pos {
            Some(pos) => amounts
                .iter()
                .find(|a| a.position >= pos)
                .map(|a| a.yuan)
                .unwrap_or_else(|| amounts.iter().map(|a| a.yuan).max().unwrap()),
            None => amounts.iter().map(|a| a.yuan).max().unwrap(),
        }
    };
    Some(DamageValue::Monetary {
        amount_yuan: chosen,
    })
}

/// The crime-name table: standard names plus an alias map. The full table
/// of the current criminal-law amendment (469 names) is a drop-in config
/// file; the default ships a starter subset.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrimeTable {
    pub standard: Vec<String>,
    /// raw → standard.
    pub aliases: Vec<(String, String)>,
}

impl Default for CrimeTable {
    fn default() -> Self {
        let names = [
            "故意伤害罪",
            "故意杀人罪",
            "盗窃罪",
            "诈骗罪",
            "抢劫罪",
            "抢夺罪",
            "危险驾驶罪",
            "交通肇事罪",
            "走私、贩卖、运输、制造毒品罪",
            "容留他人吸毒罪",
            "寻衅滋事罪",
            "聚众斗殴罪",
            "非法拘禁罪",
            "敲诈勒索罪",
            "职务侵占罪",
            "侵占罪",
            "受贿罪",
            "行贿罪",
            "强奸罪",
            "绑架罪",
            "放火罪",
            "妨害公务罪",
            "开设赌场罪",
            "掩饰、隐瞒犯罪所得、犯罪所得收益罪",
            "滥伐林木罪",
        ];
        let aliases = [
            ("故意伤害", "故意伤害罪"),
            ("盗窃", "盗窃罪"),
            ("贩卖毒品罪", "走私、贩卖、运输、制造毒品罪"),
            ("运输毒品罪", "走私、贩卖、运输、制造毒品罪"),
            ("走私毒品罪", "走私、贩卖、运输、制造毒品罪"),
            ("制造毒品罪", "走私、贩卖、运输、制造毒品罪"),
            ("掩饰、隐瞒犯罪所得罪", "掩饰、隐瞒犯罪所得、犯罪所得收益罪"),
            ("醉酒驾驶", "危险驾驶罪"),
        ];
        CrimeTable {
            standard: names.iter().map(|s| s.to_string()).collect(),
            aliases: aliases
                .iter()
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CrimeTableError {
    #[error("duplicate standard crime name {0:?}")]
    DuplicateStandard(String),
    #[error("alias {0:?} maps to more than one standard name")]
    AmbiguousAlias(String),
    #[error("alias {0:?} maps to unknown standard name {1:?}")]
    UnknownTarget(String, String),
}

impl CrimeTable {
    pub fn validate(&self) -> Result<(), CrimeTableError> {
        let mut seen = BTreeSet::new();
        for name in &self.standard {
            if !seen.insert(name) {
                return Err(CrimeTableError::DuplicateStandard(name.clone()));
            }
        }
        let mut alias_seen = BTreeSet::new();
        for (raw, std) in &self.aliases {
            if !alias_seen.insert(raw) {
                return Err(CrimeTableError::AmbiguousAlias(raw.clone()));
            }
            if !self.standard.iter().any(|s| s == std) {
                return Err(CrimeTableError::UnknownTarget(raw.clone(), std.clone()));
            }
        }
        Ok(())
    }

    /// Normalizes a raw crime name. Standard names normalize to themselves;
    /// unknown names come back unchanged and flagged.
    pub fn normalize(&self, raw: &str) -> (String, bool) {
        if self.standard.iter().any(|s| s == raw) {
            return (raw.to_string(), true);
        }
        if let Some((_, std)) = self.aliases.iter().find(|(a, _)| a == raw) {
            return (std.clone(), true);
        }
        (raw.to_string(), false)
    }

    /// Finds crime-name mentions in a clause: known names first (longest
    /// match, non-overlapping), then a fallback pattern that walks back from
    /// each remaining 罪 character to the nearest boundary. A fallback
    /// capture only counts when it follows 犯, 成, 控 or an enumeration
    /// comma, which keeps words like 数罪并罚 from reading as crime names
    /// while unknown names stay visible. Aliases without the 罪 suffix are
    /// used for normalization only, not scanning.
    pub fn scan_names(&self, text: &str) -> Vec<String> {
        let mut patterns: Vec<&str> = self
            .standard
            .iter()
            .map(String::as_str)
            .chain(
                self.aliases
                    .iter()
                    .map(|(a, _)| a.as_str())
                    .filter(|a| a.ends_with('罪')),
            )
            .collect();
        patterns.sort_by(|a, b| b.chars().count().cmp(&a.chars().count()).then(a.cmp(b)));

        let mut matches: Vec<(usize, usize, String)> = Vec::new();
        let covered = |matches: &[(usize, usize, String)], start: usize, end: usize| {
            matches.iter().any(|(s, e, _)| start < *e && end > *s)
        };
        for pattern in &patterns {
            let mut from = 0;
            while let Some(found) = text[from..].find(pattern) {
                let start = from + found;
                let end = start + pattern.len();
                if !covered(&matches, start, end) {
                    matches.push((start, end, (*pattern).to_string()));
                }
                from = end;
            }
        }

        // Fallback: any 罪 not inside an accepted match.
        let boundary = |c: char| {
            matches!(
                c,
                '，' | '。'
                    | '；'
                    | '：'
                    | '、'
                    | '！'
                    | '？'
                    | '罪'
                    | '犯'
                    | '以'
                    | '对'
                    | '被'
                    | '成'
                    | '控'
                    | '处'
            ) || c.is_whitespace()
        };
        for (idx, c) in text.char_indices() {
            if c != '罪' {
                continue;
            }
            let end = idx + c.len_utf8();
            if covered(&matches, idx, end) {
                continue;
            }
            let mut start = idx;
            let mut taken = 0;
            for (pidx, pc) in text[..idx].char_indices().rev() {
                if boundary(pc) || taken >= 12 || covered(&matches, pidx, pidx + pc.len_utf8()) {
                    break;
                }
                start = pidx;
                taken += 1;
            }
            let anchored = text[..start]
                .chars()
                .next_back()
                .is_some_and(|prev| matches!(prev, '犯' | '成' | '控' | '、'));
            if start < idx && anchored {
                matches.push((start, end, text[start..end].to_string()));
            }
        }

        matches.sort_by_key(|(start, _, _)| *start);
        let mut seen = BTreeSet::new();
        matches
            .into_iter()
            .filter(|(_, _, name)| seen.insert(name.clone()))
            .map(|(_, _, name)| name)
            .collect()
    }
}

/// Criminal charges: the first clause of the prosecutor's argument always
/// carries them.
pub fn extract_charges(
    record: &JddRecord,
    table: &CrimeTable,
    diags: &mut Vec<Diagnostic>,
) -> Vec<CrimeCharge> {
    let Some(sentence) = record
        .fact_sentences
        .iter()
        .find(|s| s.fact_class == FactClass::ProsecutorArgument)
    else {
        diags.push(Diagnostic::new(
            record.case_id.clone(),
            "no prosecutor argument sentence; charges not extracted",
        ));
        return Vec::new();
    };
    let Some(first_douduan) = sentence.douduan.first() else {
        return Vec::new();
    };
    table
        .scan_names(first_douduan)
        .into_iter()
        .map(|raw| {
            let (standard_name, normalized) = table.normalize(&raw);
            CrimeCharge {
                raw_name: raw,
                standard_name,
                stage: ChargeStage::Charged,
                normalized,
            }
        })
        .collect()
}

/// Punishment components addressable by the keyword table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PunishmentKeywordKind {
    Exemption,
    PublicSurveillance,
    Detention,
    FixedTerm,
    Probation,
    Fine,
    PoliticalRightsDeprivationForLife,
    PoliticalRightsDeprivation,
    ConfiscationDeclared,
    Confiscation,
    LifeImprisonment,
    Death,
}

impl PunishmentKeywordKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Exemption => "exemption",
            Self::PublicSurveillance => "public_surveillance",
            Self::Detention => "detention",
            Self::FixedTerm => "fixed_term",
            Self::Probation => "probation",
            Self::Fine => "fine",
            Self::PoliticalRightsDeprivationForLife => "political_rights_deprivation_for_life",
            Self::PoliticalRightsDeprivation => "political_rights_deprivation",
            Self::ConfiscationDeclared => "confiscation_declared",
            Self::Confiscation => "confiscation",
            Self::LifeImprisonment => "life_imprisonment",
            Self::Death => "death",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        [
            Self::Exemption,
            Self::PublicSurveillance,
            Self::Detention,
            Self::FixedTerm,
            Self::Probation,
            Self::Fine,
            Self::PoliticalRightsDeprivationForLife,
            Self::PoliticalRightsDeprivation,
            Self::ConfiscationDeclared,
            Self::Confiscation,
            Self::LifeImprisonment,
            Self::Death,
        ]
        .into_iter()
        .find(|k| k.name() == name)
    }
}

/// Ordered keyword table for punishment extraction. Longer keywords must
/// precede their prefixes (剥夺政治权利终身 before 剥夺政治权利); the
/// scan is left to right and consumes matched keywords.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PunishmentKeywordTable {
    pub entries: Vec<(String, PunishmentKeywordKind)>,
    /// Clauses containing any of these markers state a combined sentence
    /// across crimes and are skipped; punishments are per convicted crime.
    pub combined_sentence_markers: Vec<String>,
    /// 死刑 followed by this marker in the same clause group means death
    /// with probation, a distinct one-unit level.
    pub death_probation_marker: String,
}

impl Default for PunishmentKeywordTable {
    fn default() -> Self {
        let e = |s: &str, k| (s.to_string(), k);
        PunishmentKeywordTable {
            entries: vec![
                e("免于刑事处罚", PunishmentKeywordKind::Exemption),
                e("免予刑事处罚", PunishmentKeywordKind::Exemption),
                e("管制", PunishmentKeywordKind::PublicSurveillance),
                e("拘役", PunishmentKeywordKind::Detention),
                e("无期徒刑", PunishmentKeywordKind::LifeImprisonment),
                e("有期徒刑", PunishmentKeywordKind::FixedTerm),
                e("缓刑", PunishmentKeywordKind::Probation),
                e("罚金", PunishmentKeywordKind::Fine),
                e(
                    "剥夺政治权利终身",
                    PunishmentKeywordKind::PoliticalRightsDeprivationForLife,
                ),
                e(
                    "剥夺政治权利",
                    PunishmentKeywordKind::PoliticalRightsDeprivation,
                ),
                e(
                    "没收个人全部财产",
                    PunishmentKeywordKind::ConfiscationDeclared,
                ),
                e("没收财产", PunishmentKeywordKind::Confiscation),
                e("死刑", PunishmentKeywordKind::Death),
            ],
            combined_sentence_markers: vec!["决定执行".to_string(), "合并执行".to_string()],
            death_probation_marker: "缓期".to_string(),
        }
    }
}

struct KeywordHit {
    kind: PunishmentKeywordKind,
    /// Byte offset just past the keyword, where a duration or amount starts.
    after: usize,
}

fn scan_keywords(table: &PunishmentKeywordTable, text: &str) -> Vec<KeywordHit> {
    let mut hits = Vec::new();
    let mut pos = 0;
    'outer: while pos < text.len() {
        for (keyword, kind) in &table.entries {
            if text[pos..].starts_with(keyword.as_str()) {
                hits.push(KeywordHit {
                    kind: *kind,
                    after: pos + keyword.len(),
                });
                pos += keyword.len();
                continue 'outer;
            }
        }
        match text[pos..].chars().next() {
            Some(c) => pos += c.len_utf8(),
            None => break,
        }
    }
    hits
}

fn apply_component(
    v: &mut PunishmentVector,
    hit: &KeywordHit,
    clause: &str,
    scope: &str,
    diags: &mut Vec<Diagnostic>,
) {
    let mut duration = |field: &mut u32, what: &str| {
        match scan_duration_months(clause, hit.after) {
            Some(months) if *field == 0 => *field = months,
            Some(_) => diags.push(Diagnostic::new(
                scope.to_string(),
                format!("repeated {what} component; keeping the first"),
            )),
            None => diags.push(Diagnostic::new(
                scope.to_string(),
                format!("{what} keyword without a matchable duration"),
            )),
        }
    };
    match hit.kind {
        PunishmentKeywordKind::Exemption => v.exemption = true,
        PunishmentKeywordKind::PublicSurveillance => {
            duration(&mut v.public_surveillance_months, "public surveillance")
        }
        PunishmentKeywordKind::Detention => duration(&mut v.detention_months, "detention"),
        PunishmentKeywordKind::FixedTerm => duration(&mut v.fixed_term_months, "fixed-term"),
        PunishmentKeywordKind::Probation => duration(&mut v.probation_months, "probation"),
        PunishmentKeywordKind::PoliticalRightsDeprivation => duration(
            &mut v.political_rights_deprivation_months,
            "political-rights deprivation",
        ),
        PunishmentKeywordKind::PoliticalRightsDeprivationForLife => {
            v.political_rights_deprivation_for_life = true
        }
        PunishmentKeywordKind::Fine => {
            let (amounts, _) = extract_amounts(&clause[hit.after..]);
            match amounts.first() {
                Some(a) if v.fine_yuan == 0 => v.fine_yuan = a.yuan,
                Some(_) => diags.push(Diagnostic::new(
                    scope.to_string(),
                    "repeated fine component; keeping the first",
                )),
                None => diags.push(Diagnostic::new(
                    scope.to_string(),
                    "fine keyword without a matchable amount",
                )),
            }
        }
        PunishmentKeywordKind::ConfiscationDeclared => {
            if !v.confiscation.is_set() {
                v.confiscation = Confiscation::Declared;
            }
        }
        PunishmentKeywordKind::Confiscation => {
            if !v.confiscation.is_set() {
                let (amounts, _) = extract_amounts(&clause[hit.after..]);
                v.confiscation = match amounts.first() {
                    Some(a) => Confiscation::Amount(a.yuan),
                    None => Confiscation::Declared,
                };
            }
        }
        PunishmentKeywordKind::LifeImprisonment => v.life_imprisonment = true,
        PunishmentKeywordKind::Death => v.death = true,
    }
}

/// Extracts (crime, punishment vector) pairs from the decision section. Each
/// conviction clause opens with a clause naming the crime; the punishment
/// components of the following clauses are matched by the keyword table and
/// durations are normalized to months, fines to yuan. Combined-sentence
/// totals are ignored in favour of the per-crime punishments. Vectors are
/// validated; violations are flagged as diagnostics and the record is later
/// excluded from the matrix build.
pub fn extract_convictions_and_punishments(
    record: &JddRecord,
    table: &PunishmentKeywordTable,
    crimes: &CrimeTable,
    constraints: &ConstraintTable,
    diags: &mut Vec<Diagnostic>,
) -> Vec<(String, PunishmentVector)> {
    struct Clause {
        crime: String,
        vector: PunishmentVector,
        saw_death_probation: bool,
    }
    let mut clauses: Vec<Clause> = Vec::new();
    let mut current: Option<Clause> = None;
    let scope = record.case_id.as_str();

    for sentence in &record.decision {
        for douduan in segment_douduan(sentence) {
            if table
                .combined_sentence_markers
                .iter()
                .any(|m| douduan.contains(m.as_str()))
            {
                continue;
            }
            let names = crimes.scan_names(&douduan);
            if let Some(first) = names.first() {
                if let Some(done) = current.take() {
                    clauses.push(done);
                }
                let (standard, normalized) = crimes.normalize(first);
                if !normalized {
                    diags.push(Diagnostic::new(
                        scope.to_string(),
                        format!("unnormalized convicted crime name {first:?}"),
                    ));
                }
                current = Some(Clause {
                    crime: standard,
                    vector: PunishmentVector::default(),
                    saw_death_probation: false,
                });
            }
            let Some(clause) = current.as_mut() else {
                continue;
            };
            for hit in scan_keywords(table, &douduan) {
                apply_component(&mut clause.vector, &hit, &douduan, scope, diags);
            }
            if douduan.contains(table.death_probation_marker.as_str()) && clause.vector.death {
                clause.saw_death_probation = true;
            }
        }
    }
    if let Some(done) = current.take() {
        clauses.push(done);
    }

    let mut pairs = Vec::with_capacity(clauses.len());
    for mut clause in clauses {
        if clause.saw_death_probation {
            clause.vector.death = false;
            clause.vector.death_with_probation = true;
        }
        let violations = constraints.validate(&clause.vector);
        if !violations.is_empty() {
            diags.push(Diagnostic::new(
                scope.to_string(),
                format!(
                    "punishment for {} violates constraints: {}",
                    clause.crime,
                    violations.join(", ")
                ),
            ));
        }
        pairs.push((clause.crime, clause.vector));
    }
    pairs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{CaseType, ClassifiedSentence};

    fn table() -> PunishmentKeywordTable {
        PunishmentKeywordTable::default()
    }

    fn convict(decision: &[&str]) -> (Vec<(String, PunishmentVector)>, Vec<Diagnostic>) {
        let mut record = JddRecord::new("case-t", CaseType::Criminal);
        record.decision = decision.iter().map(|s| s.to_string()).collect();
        let mut diags = Vec::new();
        let pairs = extract_convictions_and_punishments(
            &record,
            &table(),
            &CrimeTable::default(),
            &ConstraintTable::default(),
            &mut diags,
        );
        (pairs, diags)
    }

    #[test]
    fn stolen_goods_sentence_yields_the_stated_total() {
        let mut diags = Vec::new();
        let v = extract_monetary_damage(
            "上述赃物价值共计人民币25920元。",
            &MonetaryCues::default(),
            "t",
            &mut diags,
        );
        assert_eq!(v, Some(DamageValue::Monetary { amount_yuan: 25920 }));
        assert!(diags.is_empty());
    }

    #[test]
    fn clause_without_currency_has_no_monetary_damage() {
        let mut diags = Vec::new();
        let v = extract_monetary_damage(
            "被告人当场被抓获。",
            &MonetaryCues::default(),
            "t",
            &mut diags,
        );
        assert_eq!(v, None);
    }

    #[test]
    fn grouped_digits_normalize() {
        let mut diags = Vec::new();
        let v = extract_monetary_damage(
            "人民币1,000元",
            &MonetaryCues::default(),
            "t",
            &mut diags,
        );
        assert_eq!(v, Some(DamageValue::Monetary { amount_yuan: 1000 }));
    }

    #[test]
    fn total_cue_beats_the_maximum() {
        let mut diags = Vec::new();
        let v = extract_monetary_damage(
            "盗得现金9000元及价值共计2000元的物品",
            &MonetaryCues::default(),
            "t",
            &mut diags,
        );
        assert_eq!(v, Some(DamageValue::Monetary { amount_yuan: 2000 }));
    }

    #[test]
    fn without_a_cue_the_maximum_wins() {
        let mut diags = Vec::new();
        let v = extract_monetary_damage(
            "盗得现金500元和800元",
            &MonetaryCues::default(),
            "t",
            &mut diags,
        );
        assert_eq!(v, Some(DamageValue::Monetary { amount_yuan: 800 }));
    }

    #[test]
    fn injury_keywords_map_to_levels() {
        let lex = InjuryLexicon::default();
        assert_eq!(
            extract_injury_level("经鉴定属轻伤二级。", &lex),
            Some(DamageValue::Injury {
                injury_level: InjuryLevel::MinorSecond
            })
        );
        assert_eq!(extract_injury_level("未受伤。", &lex), None);
    }

    #[test]
    fn most_severe_level_wins() {
        let lex = InjuryLexicon::default();
        assert_eq!(
            extract_injury_level("造成轻伤二级、重伤二级。", &lex),
            Some(DamageValue::Injury {
                injury_level: InjuryLevel::SeriousSecond
            })
        );
    }

    #[test]
    fn severity_order_is_total() {
        let mut sorted = InjuryLevel::ALL.to_vec();
        sorted.sort();
        assert_eq!(sorted, InjuryLevel::ALL.to_vec());
        assert!(InjuryLevel::Slight < InjuryLevel::MinorSecond);
        assert!(InjuryLevel::MinorSecond < InjuryLevel::MinorFirst);
        assert!(InjuryLevel::MinorFirst < InjuryLevel::SeriousSecond);
        assert!(InjuryLevel::SeriousSecond < InjuryLevel::SeriousFirst);
        assert!(InjuryLevel::SeriousFirst < InjuryLevel::Death);
    }

    #[test]
    fn normalization_is_idempotent_on_standard_names() {
        let t = CrimeTable::default();
        for name in &t.standard {
            let (normalized, ok) = t.normalize(name);
            assert!(ok);
            assert_eq!(&normalized, name);
        }
    }

    #[test]
    fn charges_come_from_the_first_prosecutor_clause() {
        let mut record = JddRecord::new("case-c", CaseType::Criminal);
        let mut sentence =
            ClassifiedSentence::bare("公诉机关指控被告人张某犯故意伤害罪，请求依法判处。");
        sentence.douduan = segment_douduan(&sentence.text);
        sentence.fact_class = FactClass::ProsecutorArgument;
        record.fact_sentences.push(sentence);
        let mut diags = Vec::new();
        let charges = extract_charges(&record, &CrimeTable::default(), &mut diags);
        assert_eq!(charges.len(), 1);
        assert_eq!(charges[0].standard_name, "故意伤害罪");
        assert!(charges[0].normalized);
        assert_eq!(charges[0].stage, ChargeStage::Charged);
    }

    #[test]
    fn conjoined_charges_are_both_found() {
        let t = CrimeTable::default();
        let names = t.scan_names("指控被告人犯盗窃罪、故意伤害罪");
        assert_eq!(names, vec!["盗窃罪".to_string(), "故意伤害罪".to_string()]);
    }

    #[test]
    fn unknown_crime_names_fall_back_to_the_pattern() {
        let t = CrimeTable::default();
        let names = t.scan_names("犯组织偷越国边境罪");
        assert_eq!(names, vec!["组织偷越国边境罪".to_string()]);
        let (normalized, ok) = t.normalize(&names[0]);
        assert!(!ok);
        assert_eq!(normalized, "组织偷越国边境罪");
    }

    #[test]
    fn record_without_prosecutor_argument_has_no_charges() {
        let record = JddRecord::new("case-e", CaseType::Criminal);
        let mut diags = Vec::new();
        let charges = extract_charges(&record, &CrimeTable::default(), &mut diags);
        assert!(charges.is_empty());
        assert_eq!(diags.len(), 1);
    }

    #[test]
    fn fixed_term_three_years_is_thirty_six_months() {
        let (pairs, diags) =
            convict(&["被告人张某犯故意伤害罪，判处有期徒刑三年。"]);
        assert_eq!(pairs.len(), 1);
        assert_eq!(pairs[0].0, "故意伤害罪");
        assert_eq!(pairs[0].1.fixed_term_months, 36);
        assert!(diags.is_empty());
    }

    #[test]
    fn exemption_keyword_sets_only_the_exemption_bit() {
        let (pairs, _) = convict(&["被告人张某犯盗窃罪，免于刑事处罚。"]);
        assert_eq!(pairs.len(), 1);
        let v = pairs[0].1;
        assert!(v.exemption);
        assert_eq!(
            v,
            PunishmentVector::exemption_only(),
            "exemption must leave every other component zero"
        );
    }

    #[test]
    fn fixed_term_plus_life_in_one_clause_is_flagged() {
        let (pairs, diags) =
            convict(&["被告人犯抢劫罪，判处有期徒刑三年及无期徒刑。"]);
        assert_eq!(pairs.len(), 1);
        assert!(pairs[0].1.fixed_term_months > 0);
        assert!(pairs[0].1.life_imprisonment);
        assert!(diags
            .iter()
            .any(|d| d.message.contains("violates constraints")));
    }

    #[test]
    fn combined_sentence_totals_are_ignored() {
        let (pairs, _) = convict(&[
            "被告人张某犯故意伤害罪，判处有期徒刑二年；犯盗窃罪，判处有期徒刑一年，并处罚金人民币二千元，数罪并罚，决定执行有期徒刑二年六个月。",
        ]);
        assert_eq!(pairs.len(), 2);
        assert_eq!(pairs[0].0, "故意伤害罪");
        assert_eq!(pairs[0].1.fixed_term_months, 24);
        assert_eq!(pairs[1].0, "盗窃罪");
        assert_eq!(pairs[1].1.fixed_term_months, 12);
        assert_eq!(pairs[1].1.fine_yuan, 2000);
    }

    #[test]
    fn probation_and_fine_and_rights_components_extract() {
        let (pairs, diags) = convict(&[
            "被告人李某犯危险驾驶罪，判处拘役三个月，缓刑六个月，并处罚金人民币三千元，剥夺政治权利一年。",
        ]);
        assert!(diags.is_empty(), "{diags:?}");
        let v = pairs[0].1;
        assert_eq!(v.detention_months, 3);
        assert_eq!(v.probation_months, 6);
        assert_eq!(v.fine_yuan, 3000);
        assert_eq!(v.political_rights_deprivation_months, 12);
    }

    #[test]
    fn death_with_probation_is_distinct_from_death() {
        let (pairs, _) =
            convict(&["被告人王某犯故意杀人罪，判处死刑，缓期二年执行，剥夺政治权利终身。"]);
        let v = pairs[0].1;
        assert!(v.death_with_probation);
        assert!(!v.death);
        assert!(v.political_rights_deprivation_for_life);

        let (pairs, _) = convict(&["被告人王某犯故意杀人罪，判处死刑。"]);
        assert!(pairs[0].1.death);
        assert!(!pairs[0].1.death_with_probation);
    }

    #[test]
    fn surveillance_duration_extracts() {
        let (pairs, _) = convict(&["被告人犯寻衅滋事罪，判处管制一年。"]);
        assert_eq!(pairs[0].1.public_surveillance_months, 12);
    }

    #[test]
    fn missing_duration_is_a_diagnostic_not_a_component() {
        let (pairs, diags) = convict(&["被告人犯盗窃罪，判处有期徒刑，并处罚金。"]);
        assert_eq!(pairs[0].1.fixed_term_months, 0);
        assert_eq!(pairs[0].1.fine_yuan, 0);
        assert_eq!(diags.len(), 2);
    }

    #[test]
    fn confiscation_with_amount_is_kept_losslessly() {
        let (pairs, _) =
            convict(&["被告人犯受贿罪，判处有期徒刑十年，没收财产人民币五万元。"]);
        assert_eq!(pairs[0].1.confiscation, Confiscation::Amount(50_000));
        let (pairs, _) = convict(&["被告人犯抢劫罪，判处无期徒刑，没收个人全部财产。"]);
        assert_eq!(pairs[0].1.confiscation, Confiscation::Declared);
    }
}
