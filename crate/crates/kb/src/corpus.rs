//! The JSON-lines corpus format: a schema header line, then one record per
//! line, UTF-8. The same format carries ingest input (skeleton records with
//! sentence text and a decision section) and ingest output (fully extracted
//! records).

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use jdd_core::model::JddRecord;
use jdd_core::Diagnostic;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const CORPUS_SCHEMA: &str = "jdd-corpus/1";

#[derive(Debug, Serialize, Deserialize)]
struct Header {
    schema: String,
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("cannot open {0}: {1}")]
    Open(String, std::io::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("{0} is empty; expected the schema header line")]
    MissingHeader(String),
    #[error("schema mismatch in {path}: found {found:?}, expected {expected:?}")]
    SchemaMismatch {
        path: String,
        found: String,
        expected: String,
    },
    #[error("serialization: {0}")]
    Serde(#[from] serde_json::Error),
}

/// Streaming corpus reader. Iterates records in file order; each malformed
/// line yields a diagnostic carrying its line number instead of stopping.
pub struct CorpusReader<R: BufRead> {
    lines: std::iter::Enumerate<std::io::Lines<R>>,
}

impl CorpusReader<BufReader<File>> {
    pub fn open(path: &Path) -> Result<Self, CorpusError> {
        let file = File::open(path)
            .map_err(|e| CorpusError::Open(path.display().to_string(), e))?;
        Self::new(BufReader::new(file), &path.display().to_string())
    }
}

impl<R: BufRead> CorpusReader<R> {
    pub fn new(reader: R, path: &str) -> Result<Self, CorpusError> {
        let mut lines = reader.lines().enumerate();
        let Some((_, header_line)) = lines.next() else {
            return Err(CorpusError::MissingHeader(path.to_string()));
        };
        let header_line = header_line?;
        let header: Header = serde_json::from_str(&header_line)
            .map_err(|_| CorpusError::SchemaMismatch {
                path: path.to_string(),
                found: header_line.clone(),
                expected: CORPUS_SCHEMA.to_string(),
            })?;
        if header.schema != CORPUS_SCHEMA {
            return Err(CorpusError::SchemaMismatch {
                path: path.to_string(),
                found: header.schema,
                expected: CORPUS_SCHEMA.to_string(),
            });
        }
        Ok(CorpusReader { lines })
    }
}

impl<R: BufRead> Iterator for CorpusReader<R> {
    type Item = Result<JddRecord, Diagnostic>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            let (index, line) = self.lines.next()?;
            let line_no = index + 1;
            let line = match line {
                Ok(line) => line,
                Err(e) => {
                    return Some(Err(Diagnostic::new(
                        format!("corpus line {line_no}"),
                        format!("read error: {e}"),
                    )))
                }
            };
            if line.trim().is_empty() {
                continue;
            }
            return Some(match serde_json::from_str::<JddRecord>(&line) {
                Ok(record) => Ok(record),
                Err(e) => Err(Diagnostic::new(
                    format!("corpus line {line_no}"),
                    format!("malformed record: {e}"),
                )),
            });
        }
    }
}

/// Loads a whole corpus, splitting well-formed records from per-line
/// diagnostics. Unreadable files are fatal.
pub fn load_corpus(path: &Path) -> Result<(Vec<JddRecord>, Vec<Diagnostic>), CorpusError> {
    let reader = CorpusReader::open(path)?;
    let mut records = Vec::new();
    let mut diags = Vec::new();
    for item in reader {
        match item {
            Ok(record) => records.push(record),
            Err(diag) => diags.push(diag),
        }
    }
    Ok((records, diags))
}

pub fn write_corpus(path: &Path, records: &[JddRecord]) -> Result<(), CorpusError> {
    let file = File::create(path)
        .map_err(|e| CorpusError::Open(path.display().to_string(), e))?;
    let mut w = BufWriter::new(file);
    writeln!(
        w,
        "{}",
        serde_json::to_string(&Header {
            schema: CORPUS_SCHEMA.to_string()
        })?
    )?;
    for record in records {
        writeln!(w, "{}", serde_json::to_string(record)?)?;
    }
    w.flush()?;
    Ok(())
}
