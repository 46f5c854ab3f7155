//! Seeded synthetic-corpus generator. Produces documents whose sentences,
//! parse annotations and decision text are built from known features, plus
//! the ground-truth table those features came from, so the whole pipeline
//! can be checked against independent brute-force computations.

use jdd_core::extract::{ParseSet, SentenceParse};
use jdd_core::model::{
    AttrValue, CaseType, ClassifiedSentence, Confiscation, DamageValue, InjuryLevel, JddRecord,
    Party, PartyRole, PunishmentVector,
};
use jdd_core::parse::{ConstituencyTree, DepEdge, DependencyGraph, Token, TreeNode};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ForgivenessState {
    None,
    Positive,
    Negated,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionTruth {
    pub subject: Vec<String>,
    pub trigger: String,
    pub object: Vec<String>,
    pub modifiers: Vec<String>,
    pub inherited: bool,
}

/// Everything the generator decided for one case, recorded independently of
/// the extraction pipeline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundTruthCase {
    pub case_id: String,
    pub defense_argument: bool,
    pub forgiveness: ForgivenessState,
    pub charges: Vec<String>,
    pub actions: Vec<ActionTruth>,
    pub damages: Vec<DamageValue>,
    pub convictions: Vec<(String, PunishmentVector)>,
}

pub struct SynthOutput {
    pub records: Vec<JddRecord>,
    /// (case_id, fact-sentence index, parse) for every parsed sentence.
    pub parses: Vec<(String, usize, SentenceParse)>,
    pub ground_truth: Vec<GroundTruthCase>,
}

impl SynthOutput {
    /// Parses keyed per document, as the ingest pipeline expects them.
    pub fn parse_set_for(&self, case_id: &str) -> ParseSet {
        let mut set = ParseSet::new();
        for (doc, sent, parse) in &self.parses {
            if doc == case_id {
                set.insert(*sent, parse.clone());
            }
        }
        set
    }
}

const DEFENDANTS: &[&str] = &["张某", "李某", "王某", "赵某", "孙某"];
const VICTIMS: &[&str] = &["刘某", "陈某", "周某", "吴某"];
const MODIFIERS: &[&str] = &["当面", "多次", "非法", "持械"];

struct CrimeProfile {
    name: &'static str,
    verbs: &'static [(&'static str, &'static str)], // (verb, object or "")
    injury_damage: bool,
}

const CRIMES: &[CrimeProfile] = &[
    CrimeProfile {
        name: "故意伤害罪",
        verbs: &[("殴打", "@victim"), ("推搡", "@victim"), ("打伤", "@victim")],
        injury_damage: true,
    },
    CrimeProfile {
        name: "盗窃罪",
        verbs: &[("窃取", "财物"), ("潜入", "房间"), ("销赃", "")],
        injury_damage: false,
    },
    CrimeProfile {
        name: "危险驾驶罪",
        verbs: &[("驾驶", "机动车"), ("碰撞", "护栏")],
        injury_damage: false,
    },
    CrimeProfile {
        name: "诈骗罪",
        verbs: &[("虚构", "事实"), ("骗取", "钱款")],
        injury_damage: false,
    },
];

const REMEDIAL_VERBS: &[(&str, &str)] = &[("赔偿", "损失"), ("和解", "")];

fn render_chinese_int(n: u64) -> String {
    const DIGITS: [&str; 10] = ["零", "一", "二", "三", "四", "五", "六", "七", "八", "九"];
    if n == 0 {
        return DIGITS[0].to_string();
    }
    if n < 20 && n >= 10 {
        let rest = n - 10;
        return if rest == 0 {
            "十".to_string()
        } else {
            format!("十{}", DIGITS[rest as usize])
        };
    }
    let mut out = String::new();
    let mut need_zero = false;
    let mut rest = n;
    for (unit, word) in [
        (100_000_000u64, "亿"),
        (10_000, "万"),
        (1_000, "千"),
        (100, "百"),
        (10, "十"),
        (1, ""),
    ] {
        let q = rest / unit;
        rest %= unit;
        if q == 0 {
            if !out.is_empty() {
                need_zero = true;
            }
            continue;
        }
        if need_zero {
            out.push_str(DIGITS[0]);
            need_zero = false;
        }
        if unit >= 10_000 {
            out.push_str(&render_chinese_int(q));
        } else {
            out.push_str(DIGITS[q as usize]);
        }
        out.push_str(word);
    }
    out
}

fn render_duration(months: u32) -> String {
    let years = months / 12;
    let rem = months % 12;
    if years > 0 && rem > 0 {
        format!(
            "{}年{}个月",
            render_chinese_int(years as u64),
            render_chinese_int(rem as u64)
        )
    } else if years > 0 {
        format!("{}年", render_chinese_int(years as u64))
    } else {
        format!("{}个月", render_chinese_int(rem as u64))
    }
}

fn render_money(rng: &mut ChaCha8Rng, yuan: u64) -> String {
    match rng.random_range(0..3u8) {
        0 => format!("{yuan}元"),
        1 => format!("{}元", render_chinese_int(yuan)),
        _ => {
            if yuan >= 1000 {
                let s = yuan.to_string();
                let mut grouped = String::new();
                for (i, c) in s.chars().enumerate() {
                    if i > 0 && (s.len() - i) % 3 == 0 {
                        grouped.push(',');
                    }
                    grouped.push(c);
                }
                format!("{grouped}元")
            } else {
                format!("{yuan}元")
            }
        }
    }
}

/// One clause of the parsed facts sentence, with its tokens and tree.
struct ClauseDraft {
    tokens: Vec<Token>,
    edges_local: Vec<(usize, usize, &'static str)>,
    verb_local: usize,
    subtree: TreeNode,
    truth: Option<ActionTruth>,
}

fn action_clause(
    subject: Option<&str>,
    modifier: Option<&str>,
    verb: &str,
    object: Option<&str>,
    inherited_subject: &[String],
) -> ClauseDraft {
    let mut tokens = Vec::new();
    let mut edges = Vec::new();
    let mut ip_children = Vec::new();
    if let Some(s) = subject {
        tokens.push(Token::new(s, s, "PROPN", "NR"));
        ip_children.push(TreeNode::internal(
            "NP",
            vec![TreeNode::pre_terminal("NR", s)],
        ));
    }
    if let Some(m) = modifier {
        tokens.push(Token::new(m, m, "ADV", "AD"));
        ip_children.push(TreeNode::internal(
            "ADVP",
            vec![TreeNode::pre_terminal("AD", m)],
        ));
    }
    let verb_local = tokens.len();
    tokens.push(Token::new(verb, verb, "VERB", "VV"));
    let mut vp_children = vec![TreeNode::pre_terminal("VV", verb)];
    if let Some(o) = object {
        tokens.push(Token::new(o, o, "NOUN", "NN"));
        vp_children.push(TreeNode::internal(
            "NP",
            vec![TreeNode::pre_terminal("NN", o)],
        ));
    }
    ip_children.push(TreeNode::internal("VP", vp_children));
    if subject.is_some() {
        edges.push((verb_local, 0, "nsubj"));
    }
    if let Some(m_idx) = modifier.map(|_| if subject.is_some() { 1 } else { 0 }) {
        edges.push((verb_local, m_idx, "advmod"));
    }
    if object.is_some() {
        edges.push((verb_local, verb_local + 1, "obj"));
    }
    let excluded = ["遂", "并", "且", "后", "但"];
    let truth_modifiers: Vec<String> = modifier
        .into_iter()
        .filter(|m| !excluded.contains(m))
        .map(String::from)
        .collect();
    let truth = ActionTruth {
        subject: subject
            .map(|s| vec![s.to_string()])
            .unwrap_or_else(|| inherited_subject.to_vec()),
        trigger: verb.to_string(),
        object: object.map(|o| vec![o.to_string()]).unwrap_or_default(),
        modifiers: truth_modifiers,
        inherited: subject.is_none(),
    };
    ClauseDraft {
        tokens,
        edges_local: edges,
        verb_local,
        subtree: TreeNode::internal("IP", ip_children),
        truth: Some(truth),
    }
}

fn cue_clause(cue: &str) -> ClauseDraft {
    ClauseDraft {
        tokens: vec![Token::new(cue, cue, "ADV", "AD")],
        edges_local: Vec::new(),
        verb_local: 0,
        subtree: TreeNode::internal("ADVP", vec![TreeNode::pre_terminal("AD", cue)]),
        truth: None,
    }
}

/// Assembles the flowing facts sentence: text, per-sentence parse, and the
/// action ground truth, clause by clause.
fn assemble_sentence(clauses: Vec<ClauseDraft>) -> (String, SentenceParse, Vec<ActionTruth>) {
    let mut tokens: Vec<Token> = Vec::new();
    let mut edges: Vec<DepEdge> = Vec::new();
    let mut children: Vec<TreeNode> = Vec::new();
    let mut truths = Vec::new();
    let mut clause_heads: Vec<usize> = Vec::new();
    let total = clauses.len();
    let mut first_verb: Option<usize> = None;
    for (i, clause) in clauses.into_iter().enumerate() {
        let offset = tokens.len();
        let head_global = offset + clause.verb_local;
        for (head, dep, rel) in &clause.edges_local {
            edges.push(DepEdge {
                head: offset + head,
                dep: offset + dep,
                rel: (*rel).to_string(),
            });
        }
        tokens.extend(clause.tokens);
        children.push(clause.subtree);
        if let Some(t) = clause.truth {
            truths.push(t);
            if first_verb.is_none() {
                first_verb = Some(head_global);
            }
        }
        clause_heads.push(head_global);
        // Delimiter token closing the clause.
        let delim = if i + 1 == total { "。" } else { "，" };
        let delim_index = tokens.len();
        tokens.push(Token::new(delim, delim, "PUNCT", "PU"));
        edges.push(DepEdge {
            head: head_global,
            dep: delim_index,
            rel: "punct".to_string(),
        });
        children.push(TreeNode::pre_terminal("PU", delim));
    }
    let root = first_verb.unwrap_or(0);
    for head in &clause_heads {
        if *head == root {
            continue;
        }
        // Cue clauses attach as adverbial material, action clauses as
        // conjuncts of the first action verb. Cross-clause edges are
        // dropped again when slicing per clause.
        let rel = if tokens[*head].xpos == "AD" { "advmod" } else { "conj" };
        edges.push(DepEdge {
            head: root,
            dep: *head,
            rel: rel.to_string(),
        });
    }
    let text: String = tokens.iter().map(|t| t.form.as_str()).collect();
    let graph = DependencyGraph::new(tokens, edges, root);
    debug_assert_eq!(graph.validate(), Ok(()));
    let tree = ConstituencyTree::new(TreeNode::internal("IP", children));
    (text, SentenceParse { graph, tree }, truths)
}

fn punishment_vector(rng: &mut ChaCha8Rng) -> PunishmentVector {
    let roll: f64 = rng.random();
    if roll < 0.08 {
        PunishmentVector::exemption_only()
    } else if roll < 0.28 {
        let mut v = PunishmentVector {
            detention_months: rng.random_range(1..=6),
            ..Default::default()
        };
        if rng.random_bool(0.4) {
            v.fine_yuan = rng.random_range(1..=20) * 500;
        }
        v
    } else if roll < 0.38 {
        PunishmentVector {
            public_surveillance_months: rng.random_range(1..=8) * 3,
            ..Default::default()
        }
    } else if roll < 0.45 {
        PunishmentVector {
            fine_yuan: rng.random_range(1..=40) * 250,
            ..Default::default()
        }
    } else if roll < 0.97 {
        let mut months = rng.random_range(1..=20) * 3;
        if rng.random_bool(0.06) {
            months += rng.random_range(1..=2); // an off-grid duration
        }
        let mut v = PunishmentVector {
            fixed_term_months: months,
            ..Default::default()
        };
        if months <= 36 && rng.random_bool(0.3) {
            v.probation_months = months + 12;
        }
        if rng.random_bool(0.35) {
            v.fine_yuan = rng.random_range(1..=30) * 1000;
        }
        v
    } else if roll < 0.985 {
        PunishmentVector {
            life_imprisonment: true,
            political_rights_deprivation_for_life: true,
            confiscation: Confiscation::Declared,
            ..Default::default()
        }
    } else if roll < 0.993 {
        PunishmentVector {
            death_with_probation: true,
            political_rights_deprivation_for_life: true,
            ..Default::default()
        }
    } else {
        PunishmentVector {
            death: true,
            political_rights_deprivation_for_life: true,
            ..Default::default()
        }
    }
}

fn render_decision(rng: &mut ChaCha8Rng, defendant: &str, crime: &str, v: &PunishmentVector) -> String {
    let mut parts: Vec<String> = Vec::new();
    if v.exemption {
        let keyword = if rng.random_bool(0.5) {
            "免予刑事处罚"
        } else {
            "免于刑事处罚"
        };
        parts.push(keyword.to_string());
    } else {
        if v.death || v.death_with_probation {
            parts.push("判处死刑".to_string());
            if v.death_with_probation {
                parts.push("缓期二年执行".to_string());
            }
        } else if v.life_imprisonment {
            parts.push("判处无期徒刑".to_string());
        } else if v.fixed_term_months > 0 {
            parts.push(format!(
                "判处有期徒刑{}",
                render_duration(v.fixed_term_months)
            ));
        } else if v.detention_months > 0 {
            parts.push(format!("判处拘役{}", render_duration(v.detention_months)));
        } else if v.public_surveillance_months > 0 {
            parts.push(format!(
                "判处管制{}",
                render_duration(v.public_surveillance_months)
            ));
        }
        if v.probation_months > 0 {
            parts.push(format!("缓刑{}", render_duration(v.probation_months)));
        }
        if v.fine_yuan > 0 {
            let prefix = if parts.is_empty() { "判处" } else { "并处" };
            parts.push(format!(
                "{prefix}罚金人民币{}",
                render_money(rng, v.fine_yuan)
            ));
        }
        if v.political_rights_deprivation_for_life {
            parts.push("剥夺政治权利终身".to_string());
        } else if v.political_rights_deprivation_months > 0 {
            parts.push(format!(
                "剥夺政治权利{}",
                render_duration(v.political_rights_deprivation_months)
            ));
        }
        match v.confiscation {
            Confiscation::Declared => parts.push("没收个人全部财产".to_string()),
            Confiscation::Amount(yuan) => {
                parts.push(format!("没收财产人民币{}", render_money(rng, yuan)))
            }
            Confiscation::None => {}
        }
    }
    format!("被告人{defendant}犯{crime}，{}。", parts.join("，"))
}

/// Generates `size` cases. Deterministic per seed: identical seeds yield
/// byte-identical corpora, parses and ground truth.
pub fn generate(seed: u64, size: usize) -> SynthOutput {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut records = Vec::with_capacity(size);
    let mut parses = Vec::new();
    let mut ground_truth = Vec::with_capacity(size);

    for index in 0..size {
        let case_id = format!("case-{index:05}");
        let defendant = DEFENDANTS[rng.random_range(0..DEFENDANTS.len())];
        let victim = VICTIMS[rng.random_range(0..VICTIMS.len())];
        let primary = &CRIMES[weighted_crime(&mut rng)];
        let mut crimes: Vec<&CrimeProfile> = vec![primary];
        if rng.random_bool(0.12) {
            let secondary = &CRIMES[weighted_crime(&mut rng)];
            if secondary.name != primary.name {
                crimes.push(secondary);
            }
        }
        let defense = rng.random_bool(0.45);
        let forgiveness = if rng.random_bool(0.35) {
            if rng.random_bool(0.25) {
                ForgivenessState::Negated
            } else {
                ForgivenessState::Positive
            }
        } else {
            ForgivenessState::None
        };

        // Facts clauses: cue, then one or two primary-crime actions, then
        // optional remedial / excluded-adverb / forgiveness clauses.
        let mut clauses = vec![cue_clause("经审理查明")];
        let mut current_subject: Vec<String> = Vec::new();
        let n_actions = rng.random_range(1..=2usize);
        for a in 0..n_actions {
            let (verb, object) = primary.verbs[rng.random_range(0..primary.verbs.len())];
            let object = match object {
                "" => None,
                "@victim" => Some(victim),
                fixed => Some(fixed),
            };
            let explicit = a == 0 || rng.random_bool(0.5);
            let subject = explicit.then_some(defendant);
            let modifier = rng
                .random_bool(0.4)
                .then(|| MODIFIERS[rng.random_range(0..MODIFIERS.len())]);
            let clause = action_clause(subject, modifier, verb, object, &current_subject);
            if explicit {
                current_subject = vec![defendant.to_string()];
            }
            clauses.push(clause);
        }
        if rng.random_bool(0.25) {
            clauses.push(action_clause(None, Some("遂"), "逃离", None, &current_subject));
        }
        if rng.random_bool(0.3) {
            let (verb, object) = REMEDIAL_VERBS[rng.random_range(0..REMEDIAL_VERBS.len())];
            let object = (!object.is_empty()).then_some(object);
            clauses.push(action_clause(Some(defendant), None, verb, object, &[]));
        }
        match forgiveness {
            ForgivenessState::None => {}
            ForgivenessState::Positive => {
                clauses.push(action_clause(Some(victim), None, "谅解", Some(defendant), &[]));
            }
            ForgivenessState::Negated => {
                clauses.push(action_clause(
                    Some(victim),
                    Some("未"),
                    "谅解",
                    Some(defendant),
                    &[],
                ));
            }
        }
        let (facts_text, facts_parse, action_truths) = assemble_sentence(clauses);

        // Damages.
        let mut damages: Vec<DamageValue> = Vec::new();
        let mut damage_sentences: Vec<String> = Vec::new();
        if primary.injury_damage {
            if rng.random_bool(0.9) {
                let level = weighted_injury(&mut rng);
                if level == InjuryLevel::Death {
                    damage_sentences
                        .push(format!("经鉴定，被害人{victim}经抢救无效死亡。"));
                } else {
                    let keyword = match level {
                        InjuryLevel::Slight => "轻微伤",
                        InjuryLevel::MinorSecond => "轻伤二级",
                        InjuryLevel::MinorFirst => "轻伤一级",
                        InjuryLevel::SeriousSecond => "重伤二级",
                        InjuryLevel::SeriousFirst => "重伤一级",
                        InjuryLevel::Death => unreachable!(),
                    };
                    damage_sentences.push(format!(
                        "经鉴定，被害人{victim}的损伤程度为{keyword}。"
                    ));
                }
                damages.push(DamageValue::Injury {
                    injury_level: level,
                });
            }
        } else if rng.random_bool(0.8) {
            let amount = rng.random_range(2..=400u64) * 100;
            damage_sentences.push(format!(
                "上述财物价值共计人民币{}。",
                render_money(&mut rng, amount)
            ));
            damages.push(DamageValue::Monetary {
                amount_yuan: amount,
            });
        }

        // Convictions.
        let mut convictions: Vec<(String, PunishmentVector)> = Vec::new();
        let mut decision: Vec<String> = Vec::new();
        for crime in &crimes {
            let vector = punishment_vector(&mut rng);
            decision.push(render_decision(&mut rng, defendant, crime.name, &vector));
            convictions.push((crime.name.to_string(), vector));
        }
        if convictions.len() > 1 {
            let total: u32 = convictions
                .iter()
                .map(|(_, v)| v.fixed_term_months + v.detention_months)
                .sum();
            if total > 0 {
                let last = decision.last_mut().unwrap();
                last.truncate(last.len() - "。".len());
                last.push_str(&format!(
                    "，数罪并罚，决定执行有期徒刑{}。",
                    render_duration(total.max(6))
                ));
            }
        }

        // Assemble the document.
        let charge_list: Vec<&str> = crimes.iter().map(|c| c.name).collect();
        let mut sentences: Vec<ClassifiedSentence> = Vec::new();
        sentences.push(ClassifiedSentence::bare(
            "本院受理后依法组成合议庭公开开庭审理了本案。",
        ));
        sentences.push(ClassifiedSentence::bare(format!(
            "公诉机关指控被告人{defendant}犯{}。",
            charge_list.join("、")
        )));
        if rng.random_bool(0.3) {
            sentences.push(ClassifiedSentence::bare(
                "公诉机关认为，被告人自愿认罪，建议判处相应刑罚。",
            ));
        }
        if defense {
            sentences.push(ClassifiedSentence::bare(
                "被告人辩称其行为事出有因，请求从轻处罚。",
            ));
        }
        let facts_index = sentences.len();
        sentences.push(ClassifiedSentence::bare(facts_text));
        for s in &damage_sentences {
            sentences.push(ClassifiedSentence::bare(s.clone()));
        }
        sentences.push(ClassifiedSentence::bare(
            "上述事实，有被害人陈述、证人证言等证据证实，足以认定。",
        ));

        let mut record = JddRecord::new(&case_id, CaseType::Criminal);
        record.parties.push(Party {
            role: PartyRole::Prosecutor,
            name: "某区人民检察院".to_string(),
            attributes: Default::default(),
        });
        let mut defendant_party = Party {
            role: PartyRole::Defendant,
            name: defendant.to_string(),
            attributes: Default::default(),
        };
        if rng.random_bool(0.15) {
            let mut prior = std::collections::BTreeMap::new();
            prior.insert(
                "kind".to_string(),
                AttrValue::Text("行政拘留".to_string()),
            );
            prior.insert("duration_days".to_string(), AttrValue::Number(10));
            defendant_party.attributes.insert(
                "law_enforcement_actions".to_string(),
                AttrValue::List(vec![AttrValue::Map(prior)]),
            );
        }
        record.parties.push(defendant_party);
        if defense {
            record.parties.push(Party {
                role: PartyRole::Counsel,
                name: "某律师事务所律师".to_string(),
                attributes: Default::default(),
            });
        }
        record.fact_sentences = sentences;
        record.decision = decision;

        parses.push((case_id.clone(), facts_index, facts_parse));
        ground_truth.push(GroundTruthCase {
            case_id: case_id.clone(),
            defense_argument: defense,
            forgiveness,
            charges: charge_list.iter().map(|s| s.to_string()).collect(),
            actions: action_truths,
            damages,
            convictions,
        });
        records.push(record);
    }

    SynthOutput {
        records,
        parses,
        ground_truth,
    }
}

fn weighted_crime(rng: &mut ChaCha8Rng) -> usize {
    let roll: f64 = rng.random();
    if roll < 0.5 {
        0
    } else if roll < 0.75 {
        1
    } else if roll < 0.9 {
        2
    } else {
        3
    }
}

fn weighted_injury(rng: &mut ChaCha8Rng) -> InjuryLevel {
    let roll: f64 = rng.random();
    if roll < 0.15 {
        InjuryLevel::Slight
    } else if roll < 0.55 {
        InjuryLevel::MinorSecond
    } else if roll < 0.75 {
        InjuryLevel::MinorFirst
    } else if roll < 0.9 {
        InjuryLevel::SeriousSecond
    } else if roll < 0.97 {
        InjuryLevel::SeriousFirst
    } else {
        InjuryLevel::Death
    }
}
