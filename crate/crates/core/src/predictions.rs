//! The predictions file format shared by baselines and the evaluator:
//! JSONL with one `{image_id, question, prediction}` object per line.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredictionRecord {
    pub image_id: String,
    pub question: String,
    pub prediction: String,
}

/// Parse a predictions file. Line numbers in errors are 1-based; blank lines
/// are skipped.
pub fn read_predictions(path: &Path) -> Result<Vec<PredictionRecord>> {
    let bytes = std::fs::read(path)?;
    let mut records = Vec::new();
    for (line_no, raw) in bytes.split(|&b| b == b'\n').enumerate() {
        let line = std::str::from_utf8(raw).map_err(|_| Error::Encoding {
            record: line_no + 1,
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let record: PredictionRecord = serde_json::from_str(line).map_err(|e| Error::Schema {
            record: line_no + 1,
            message: e.to_string(),
        })?;
        records.push(record);
    }
    Ok(records)
}

/// Serialize records as JSONL in order.
pub fn to_jsonl(records: &[PredictionRecord]) -> String {
    let mut out = String::new();
    for r in records {
        out.push_str(&serde_json::to_string(r).expect("record serializes"));
        out.push('\n');
    }
    out
}
