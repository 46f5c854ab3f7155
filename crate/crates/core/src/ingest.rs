//! Clause segmentation and discourse classification of fact sentences.
//!
//! The clause (逗断) is the minimum text-processing unit: a flowing sentence
//! is split at clause punctuation, with each delimiter kept attached to the
//! clause it terminates so concatenation reconstructs the sentence exactly.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use alloc::vec;

use serde::{Deserialize, Serialize};

use crate::model::{ClassifiedSentence, FactClass};

/// Clause delimiters. The enumeration comma 、 is deliberately absent: it
/// joins noun lists, not clauses.
pub const DOUDUAN_DELIMITERS: &[char] = &['，', '；', '。', '！', '？'];

/// Paired quotes and brackets inside which delimiters do not split.
const BRACKET_PAIRS: &[(char, char)] = &[
    ('“', '”'),
    ('‘', '’'),
    ('（', '）'),
    ('(', ')'),
    ('《', '》'),
    ('【', '】'),
    ('[', ']'),
    ('「', '」'),
    ('『', '』'),
    ('〈', '〉'),
];

fn closer_for(c: char) -> Option<char> {
    BRACKET_PAIRS.iter().find(|(o, _)| *o == c).map(|(_, c)| *c)
}

/// Splits a sentence into clauses. Lossless: joining the result yields the
/// input byte for byte.
pub fn segment_douduan(sentence: &str) -> Vec<String> {
    let mut segments = Vec::new();
    let mut open: Vec<char> = Vec::new();
    let mut start = 0usize;
    for (idx, c) in sentence.char_indices() {
        if let Some(&expected) = open.last() {
            if c == expected {
                open.pop();
                continue;
            }
        }
        if let Some(closer) = closer_for(c) {
            open.push(closer);
            continue;
        }
        if open.is_empty() && DOUDUAN_DELIMITERS.contains(&c) {
            let end = idx + c.len_utf8();
            segments.push(sentence[start..end].to_string());
            start = end;
        }
    }
    if start < sentence.len() {
        segments.push(sentence[start..].to_string());
    }
    segments
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FallbackPolicy {
    /// A cue-less sentence takes the class of its predecessor; consecutive
    /// sentences usually stay in one discourse section.
    InheritPrevious,
    Unclassified,
}

/// Ordered cue table driving sentence classification. The first cue that
/// occurs in a sentence assigns the class, so more specific cues belong
/// earlier. Classes without any cue must be listed in `cueless`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CuePhraseTable {
    pub entries: Vec<(String, FactClass)>,
    pub fallback: FallbackPolicy,
    #[serde(default)]
    pub cueless: Vec<FactClass>,
}

impl Default for CuePhraseTable {
    fn default() -> Self {
        let cue = |s: &str, c: FactClass| (s.to_string(), c);
        CuePhraseTable {
            entries: vec![
                cue("经审理查明", FactClass::CourtFacts),
                cue("审理查明", FactClass::CourtFacts),
                cue("本院查明", FactClass::CourtFacts),
                cue("上述事实", FactClass::CourtEvidence),
                cue("经庭审质证", FactClass::CourtEvidence),
                cue("足以认定", FactClass::CourtEvidence),
                cue("公诉机关认为", FactClass::ProsecutorOpinion),
                cue("建议判处", FactClass::ProsecutorOpinion),
                cue("辩护人出示", FactClass::DefendantEvidence),
                cue("被告人提交", FactClass::DefendantEvidence),
                cue("辩称", FactClass::DefendantArgument),
                cue("辩护意见", FactClass::DefendantArgument),
                cue("辩护人提出", FactClass::DefendantArgument),
                cue("当庭出示", FactClass::ProsecutorEvidence),
                cue("宣读了", FactClass::ProsecutorEvidence),
                cue("公诉机关指控", FactClass::ProsecutorArgument),
                cue("检察院指控", FactClass::ProsecutorArgument),
                cue("指控", FactClass::ProsecutorArgument),
                cue("诉称", FactClass::ProsecutorArgument),
                cue("提起公诉", FactClass::CaseBackground),
                cue("受理后", FactClass::CaseBackground),
            ],
            fallback: FallbackPolicy::InheritPrevious,
            cueless: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CueTableError {
    #[error("cue table has no entries")]
    Empty,
    #[error("cue table contains an empty cue string")]
    EmptyCue,
    #[error("class {0} has no cue and is not marked cue-less")]
    UncoveredClass(&'static str),
}

impl CuePhraseTable {
    pub fn validate(&self) -> Result<(), CueTableError> {
        if self.entries.is_empty() {
            return Err(CueTableError::Empty);
        }
        if self.entries.iter().any(|(cue, _)| cue.is_empty()) {
            return Err(CueTableError::EmptyCue);
        }
        for class in FactClass::ALL_CLASSIFIED {
            let covered = self.entries.iter().any(|(_, c)| *c == class)
                || self.cueless.contains(&class);
            if !covered {
                return Err(CueTableError::UncoveredClass(class.name()));
            }
        }
        Ok(())
    }

    fn matching_class(&self, sentence: &str) -> Option<FactClass> {
        self.entries
            .iter()
            .find(|(cue, _)| sentence.contains(cue.as_str()))
            .map(|(_, class)| *class)
    }
}

/// Assigns exactly one class to every sentence, in document order. The first
/// sentence without a cue is case background; later cue-less sentences
/// follow the fallback policy.
pub fn classify_sentences(
    sentences: &[String],
    cues: &CuePhraseTable,
) -> Result<Vec<ClassifiedSentence>, CueTableError> {
    cues.validate()?;
    let mut out = Vec::with_capacity(sentences.len());
    let mut previous = FactClass::Unclassified;
    for (i, text) in sentences.iter().enumerate() {
        let class = match cues.matching_class(text) {
            Some(c) => c,
            None if i == 0 => FactClass::CaseBackground,
            None => match cues.fallback {
                FallbackPolicy::InheritPrevious => previous,
                FallbackPolicy::Unclassified => FactClass::Unclassified,
            },
        };
        previous = class;
        out.push(ClassifiedSentence {
            text: text.clone(),
            douduan: segment_douduan(text),
            fact_class: class,
            dependency_parse: None,
            constituency_parse: None,
        });
    }
    Ok(out)
}
