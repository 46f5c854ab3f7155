//! Versioned knowledge-base snapshots: a single JSON document with a schema
//! tag. Deterministic by construction — every map in the knowledge base is
//! ordered, so serializing the same build twice yields identical bytes.

use std::fs;
use std::path::Path;

use jdd_core::kb::KnowledgeBase;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const SNAPSHOT_SCHEMA: &str = "jdd-kb-snapshot/1";

#[derive(Serialize, Deserialize)]
struct SnapshotDoc {
    schema: String,
    kb: KnowledgeBase,
}

#[derive(Serialize, Deserialize)]
struct SchemaProbe {
    schema: String,
}

#[derive(Debug, Error)]
pub enum SnapshotError {
    #[error("cannot access {0}: {1}")]
    Io(String, std::io::Error),
    #[error("snapshot version mismatch in {path}: found {found:?}, expected {expected:?}")]
    VersionMismatch {
        path: String,
        found: String,
        expected: String,
    },
    #[error("snapshot {0} is corrupt or truncated: {1}")]
    Integrity(String, serde_json::Error),
}

pub fn save_kb(kb: &KnowledgeBase, path: &Path) -> Result<(), SnapshotError> {
    let doc = SnapshotDoc {
        schema: SNAPSHOT_SCHEMA.to_string(),
        kb: kb.clone(),
    };
    let mut bytes = serde_json::to_vec(&doc)
        .map_err(|e| SnapshotError::Integrity(path.display().to_string(), e))?;
    bytes.push(b'\n');
    fs::write(path, bytes).map_err(|e| SnapshotError::Io(path.display().to_string(), e))
}

pub fn load_kb(path: &Path) -> Result<KnowledgeBase, SnapshotError> {
    let text = fs::read_to_string(path)
        .map_err(|e| SnapshotError::Io(path.display().to_string(), e))?;
    let probe: SchemaProbe = serde_json::from_str(&text)
        .map_err(|e| SnapshotError::Integrity(path.display().to_string(), e))?;
    if probe.schema != SNAPSHOT_SCHEMA {
        return Err(SnapshotError::VersionMismatch {
            path: path.display().to_string(),
            found: probe.schema,
            expected: SNAPSHOT_SCHEMA.to_string(),
        });
    }
    let doc: SnapshotDoc = serde_json::from_str(&text)
        .map_err(|e| SnapshotError::Integrity(path.display().to_string(), e))?;
    Ok(doc.kb)
}

#[cfg(test)]
mod tests {
    use super::*;
    use jdd_core::config::EngineConfig;
    use jdd_core::kb::build_matrix;
    use jdd_core::model::{ActionRecord, CaseType, JddRecord, PunishmentVector, SourceRef};

    fn toy_kb() -> KnowledgeBase {
        let mut r = JddRecord::new("c1", CaseType::Criminal);
        r.actions.push(ActionRecord {
            subject: vec!["被告人".to_string()],
            trigger: "殴打".to_string(),
            object: vec![],
            action_modifier: vec![],
            source: SourceRef {
                sentence: 0,
                douduan: 0,
            },
            subject_inherited: false,
        });
        r.punishments.push((
            "故意伤害罪".to_string(),
            PunishmentVector {
                fixed_term_months: 12,
                ..Default::default()
            },
        ));
        let mut diags = Vec::new();
        build_matrix(&[r], &EngineConfig::default(), &mut diags).0
    }

    #[test]
    fn snapshot_round_trip_is_identical() {
        let kb = toy_kb();
        let dir = std::env::temp_dir().join("jdd-snapshot-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("kb.json");
        save_kb(&kb, &path).unwrap();
        let loaded = load_kb(&path).unwrap();
        assert_eq!(loaded, kb);
    }

    #[test]
    fn saving_twice_is_byte_identical() {
        let kb = toy_kb();
        let dir = std::env::temp_dir().join("jdd-snapshot-test-det");
        std::fs::create_dir_all(&dir).unwrap();
        let a = dir.join("a.json");
        let b = dir.join("b.json");
        save_kb(&kb, &a).unwrap();
        save_kb(&kb, &b).unwrap();
        assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    }

    #[test]
    fn truncated_snapshots_fail_integrity() {
        let kb = toy_kb();
        let dir = std::env::temp_dir().join("jdd-snapshot-test-trunc");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("kb.json");
        save_kb(&kb, &path).unwrap();
        let bytes = std::fs::read(&path).unwrap();
        std::fs::write(&path, &bytes[..bytes.len() / 2]).unwrap();
        assert!(matches!(
            load_kb(&path),
            Err(SnapshotError::Integrity(_, _))
        ));
    }

    #[test]
    fn version_mismatch_names_both_versions() {
        let dir = std::env::temp_dir().join("jdd-snapshot-test-ver");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("kb.json");
        std::fs::write(&path, "{\"schema\":\"jdd-kb-snapshot/0\",\"kb\":{}}").unwrap();
        match load_kb(&path) {
            Err(SnapshotError::VersionMismatch {
                found, expected, ..
            }) => {
                assert_eq!(found, "jdd-kb-snapshot/0");
                assert_eq!(expected, SNAPSHOT_SCHEMA);
            }
            other => panic!("expected version mismatch, got {other:?}"),
        }
    }
}
