pub mod augment;
pub mod baseline;
pub mod eda;
pub mod evaluate;
pub mod ingest;
pub mod split;

use std::path::{Path, PathBuf};

use gi_vqa_core::corpus::{load_corpus, Corpus, CorpusFormat, Split, SplitManifest};

use crate::error::{CliError, CliResult};

/// Load a corpus picking the format from the file extension
/// (`.csv` for CSV, anything else is treated as JSONL).
pub fn load_corpus_auto(path: &Path) -> CliResult<Corpus> {
    let format = match path.extension().and_then(|e| e.to_str()) {
        Some(ext) if ext.eq_ignore_ascii_case("csv") => CorpusFormat::Csv,
        _ => CorpusFormat::Jsonl,
    };
    Ok(load_corpus(path, format)?)
}

pub fn split_manifest_path(dir: &Path, split: Split) -> PathBuf {
    dir.join(format!("split_{split}.json"))
}

/// Read one split manifest and check it against the corpus it came from.
pub fn read_split_manifest(dir: &Path, split: Split, corpus: &Corpus) -> CliResult<SplitManifest> {
    let path = split_manifest_path(dir, split);
    let text = std::fs::read_to_string(&path)
        .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
    let manifest: SplitManifest = serde_json::from_str(&text)
        .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    for member in &manifest.members {
        match corpus.get(member.row_index) {
            Some(t) if t.image_id == member.image_id => {}
            Some(t) => {
                return Err(CliError::input(format!(
                    "{}: row {} is {:?} in the corpus but {:?} in the manifest",
                    path.display(),
                    member.row_index,
                    t.image_id,
                    member.image_id
                )))
            }
            None => {
                return Err(CliError::input(format!(
                    "{}: row {} is out of range for this corpus",
                    path.display(),
                    member.row_index
                )))
            }
        }
    }
    Ok(manifest)
}
