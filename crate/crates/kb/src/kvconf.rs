//! The plain structured-text key-value format used by every config file:
//! a version header, `[section]` lines, and repeatable `key = value`
//! entries. Order is preserved; `#` starts a comment.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Section {
    pub name: String,
    pub entries: Vec<(String, String)>,
}

impl Section {
    pub fn values<'a>(&'a self, key: &str) -> impl Iterator<Item = &'a str> {
        let key = key.to_string();
        self.entries
            .iter()
            .filter(move |(k, _)| *k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn first(&self, key: &str) -> Option<&str> {
        self.values(key).next()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KvDocument {
    pub version: u32,
    pub sections: Vec<Section>,
}

impl KvDocument {
    pub fn section(&self, name: &str) -> Option<&Section> {
        self.sections.iter().find(|s| s.name == name)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum KvError {
    #[error("line {0}: expected the version header `version = <n>` first")]
    MissingVersion(usize),
    #[error("line {0}: malformed entry {1:?}")]
    Malformed(usize, String),
    #[error("line {0}: entry outside any section")]
    EntryOutsideSection(usize),
    #[error("unsupported config version {0} (supported: {1})")]
    UnsupportedVersion(u32, u32),
}

pub const SUPPORTED_VERSION: u32 = 1;

pub fn parse(text: &str) -> Result<KvDocument, KvError> {
    let mut version: Option<u32> = None;
    let mut sections: Vec<Section> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[') {
            let Some(name) = name.strip_suffix(']') else {
                return Err(KvError::Malformed(line_no, raw.to_string()));
            };
            if version.is_none() {
                return Err(KvError::MissingVersion(line_no));
            }
            sections.push(Section {
                name: name.trim().to_string(),
                entries: Vec::new(),
            });
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(KvError::Malformed(line_no, raw.to_string()));
        };
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        if version.is_none() {
            if key != "version" {
                return Err(KvError::MissingVersion(line_no));
            }
            let v: u32 = value
                .parse()
                .map_err(|_| KvError::Malformed(line_no, raw.to_string()))?;
            if v != SUPPORTED_VERSION {
                return Err(KvError::UnsupportedVersion(v, SUPPORTED_VERSION));
            }
            version = Some(v);
            continue;
        }
        match sections.last_mut() {
            Some(section) => section.entries.push((key, value)),
            None => return Err(KvError::EntryOutsideSection(line_no)),
        }
    }
    Ok(KvDocument {
        version: version.ok_or(KvError::MissingVersion(text.lines().count().max(1)))?,
        sections,
    })
}
