//! Corpus ingestion, validation, stratified subsetting, and splitting.
//!
//! A corpus is an ordered list of image/source/question/answer records. Two
//! file formats are accepted: CSV with the header `image,source,question,
//! answer` (RFC 4180 quoting) and JSONL with one object per line carrying the
//! same keys. Iteration order is always ingestion order.
//!
//! Subsetting and splitting are deterministic functions of the corpus
//! content, the parameters, and the seed. Each stratum gets its own derived
//! SplitMix64 stream, so results do not depend on stratum processing order.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fsio::sha256_hex;
use crate::rng::SeededStream;

/// One image-question-answer record.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IqaTriplet {
    #[serde(rename = "image")]
    pub image_id: String,
    #[serde(rename = "source")]
    pub source_label: String,
    pub question: String,
    pub answer: String,
}

impl IqaTriplet {
    /// Trim surrounding whitespace and reject records with an empty field.
    fn validated(mut self, record: usize) -> Result<IqaTriplet> {
        self.image_id = self.image_id.trim().to_string();
        self.source_label = self.source_label.trim().to_string();
        self.question = self.question.trim().to_string();
        self.answer = self.answer.trim().to_string();
        for (name, value) in [
            ("image", &self.image_id),
            ("source", &self.source_label),
            ("question", &self.question),
            ("answer", &self.answer),
        ] {
            if value.is_empty() {
                return Err(Error::Schema {
                    record,
                    message: format!("field {name:?} is empty"),
                });
            }
        }
        Ok(self)
    }
}

/// Input format for [`load_corpus`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CorpusFormat {
    Csv,
    Jsonl,
}

/// Validated, immutable collection of triplets in ingestion order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corpus {
    triplets: Vec<IqaTriplet>,
    label_set: BTreeSet<String>,
    question_templates: BTreeSet<String>,
}

impl Corpus {
    /// Build a corpus from already-parsed triplets. Records are trimmed and
    /// validated; duplicates are retained.
    pub fn from_triplets(triplets: Vec<IqaTriplet>) -> Result<Corpus> {
        let triplets: Vec<IqaTriplet> = triplets
            .into_iter()
            .enumerate()
            .map(|(i, t)| t.validated(i + 1))
            .collect::<Result<_>>()?;
        let label_set = triplets.iter().map(|t| t.source_label.clone()).collect();
        let question_templates = triplets.iter().map(|t| t.question.clone()).collect();
        Ok(Corpus {
            triplets,
            label_set,
            question_templates,
        })
    }

    pub fn len(&self) -> usize {
        self.triplets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triplets.is_empty()
    }

    pub fn get(&self, index: usize) -> Option<&IqaTriplet> {
        self.triplets.get(index)
    }

    pub fn triplets(&self) -> &[IqaTriplet] {
        &self.triplets
    }

    pub fn iter(&self) -> std::slice::Iter<'_, IqaTriplet> {
        self.triplets.iter()
    }

    /// Source labels actually present.
    pub fn label_set(&self) -> &BTreeSet<String> {
        &self.label_set
    }

    /// Distinct question strings actually present.
    pub fn question_templates(&self) -> &BTreeSet<String> {
        &self.question_templates
    }

    /// Corpus restricted to `indices` (in the given order).
    pub fn select(&self, indices: &[usize]) -> Result<Corpus> {
        let triplets = indices
            .iter()
            .map(|&i| {
                self.triplets.get(i).cloned().ok_or_else(|| {
                    Error::Parameter(format!("row index {i} out of range 0..{}", self.len()))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Corpus::from_triplets(triplets)
    }

    /// Serialize as canonical JSONL (one object per line, keys
    /// `image,source,question,answer`).
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for t in &self.triplets {
            out.push_str(&serde_json::to_string(t).expect("triplet serializes"));
            out.push('\n');
        }
        out
    }
}

/// Load and validate a corpus file. Records keep file order; nothing is
/// deduplicated. Record numbers in errors are 1-based data rows.
pub fn load_corpus(path: &Path, format: CorpusFormat) -> Result<Corpus> {
    let bytes = std::fs::read(path)?;
    let triplets = match format {
        CorpusFormat::Csv => parse_csv(&bytes)?,
        CorpusFormat::Jsonl => parse_jsonl(&bytes)?,
    };
    if triplets.is_empty() {
        return Err(Error::EmptyCorpus(path.display().to_string()));
    }
    Corpus::from_triplets(triplets)
}

fn parse_csv(bytes: &[u8]) -> Result<Vec<IqaTriplet>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .from_reader(bytes);

    let headers = reader
        .headers()
        .map_err(|e| csv_error_to_ours(e, 0))?
        .clone();
    for required in ["image", "source", "question", "answer"] {
        if !headers.iter().any(|h| h == required) {
            return Err(Error::Schema {
                record: 0,
                message: format!("header is missing column {required:?}"),
            });
        }
    }

    let mut triplets = Vec::new();
    for (i, row) in reader.deserialize::<IqaTriplet>().enumerate() {
        let record = i + 1;
        let triplet = row
            .map_err(|e| csv_error_to_ours(e, record))?
            .validated(record)?;
        triplets.push(triplet);
    }
    Ok(triplets)
}

fn csv_error_to_ours(e: csv::Error, record: usize) -> Error {
    match e.kind() {
        csv::ErrorKind::Utf8 { .. } => Error::Encoding { record },
        _ => Error::Schema {
            record,
            message: e.to_string(),
        },
    }
}

fn parse_jsonl(bytes: &[u8]) -> Result<Vec<IqaTriplet>> {
    let mut triplets = Vec::new();
    let mut record = 0;
    for (line_no, raw) in bytes.split(|&b| b == b'\n').enumerate() {
        let line = std::str::from_utf8(raw).map_err(|_| Error::Encoding {
            record: line_no + 1,
        })?;
        if line.trim().is_empty() {
            continue;
        }
        record += 1;
        let triplet: IqaTriplet = serde_json::from_str(line).map_err(|e| Error::Schema {
            record: line_no + 1,
            message: e.to_string(),
        })?;
        triplets.push(triplet.validated(line_no + 1)?);
    }
    let _ = record;
    Ok(triplets)
}

/// Exact whole-corpus counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetStats {
    pub n_triplets: usize,
    pub n_unique_images: usize,
    pub n_question_templates: usize,
    pub n_unique_answers: usize,
}

pub fn dataset_stats(corpus: &Corpus) -> DatasetStats {
    let images: BTreeSet<&str> = corpus.iter().map(|t| t.image_id.as_str()).collect();
    let answers: BTreeSet<&str> = corpus.iter().map(|t| t.answer.as_str()).collect();
    DatasetStats {
        n_triplets: corpus.len(),
        n_unique_images: images.len(),
        n_question_templates: corpus.question_templates().len(),
        n_unique_answers: answers.len(),
    }
}

/// Which field defines the strata.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum StrataKey {
    SourceLabel,
    #[default]
    QuestionTemplate,
}

impl StrataKey {
    fn of<'a>(&self, triplet: &'a IqaTriplet) -> &'a str {
        match self {
            StrataKey::SourceLabel => &triplet.source_label,
            StrataKey::QuestionTemplate => &triplet.question,
        }
    }
}

impl fmt::Display for StrataKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StrataKey::SourceLabel => write!(f, "source_label"),
            StrataKey::QuestionTemplate => write!(f, "question_template"),
        }
    }
}

/// Round-half-up count of selected members, with at least one per non-empty
/// stratum.
fn stratum_quota(fraction: f64, size: usize) -> usize {
    let quota = (fraction * size as f64 + 0.5).floor() as usize;
    quota.clamp(1, size)
}

fn group_by_stratum(
    corpus: &Corpus,
    indices: impl Iterator<Item = usize>,
    key: StrataKey,
) -> BTreeMap<&str, Vec<usize>> {
    let mut groups: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for i in indices {
        groups
            .entry(key.of(&corpus.triplets()[i]))
            .or_default()
            .push(i);
    }
    groups
}

/// Row indices of a seed-reproducible stratified subset, ascending.
///
/// Within each stratum the members are Fisher-Yates shuffled on the stream
/// derived from `(seed, "subset|" + stratum)` and the first
/// `max(1, round_half_up(fraction * size))` are kept.
pub fn stratified_subset_indices(
    corpus: &Corpus,
    fraction: f64,
    key: StrataKey,
    seed: u64,
) -> Result<Vec<usize>> {
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(Error::Parameter(format!(
            "subset fraction must be in (0, 1], got {fraction}"
        )));
    }
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus("cannot subset an empty corpus".into()));
    }
    let mut selected = Vec::new();
    for (label, mut members) in group_by_stratum(corpus, 0..corpus.len(), key) {
        let quota = stratum_quota(fraction, members.len());
        let mut stream = SeededStream::derive(seed, &format!("subset|{label}"));
        stream.shuffle(&mut members);
        selected.extend_from_slice(&members[..quota]);
    }
    selected.sort_unstable();
    Ok(selected)
}

/// Stratified subset as a corpus, preserving original relative order.
pub fn stratified_subset(
    corpus: &Corpus,
    fraction: f64,
    key: StrataKey,
    seed: u64,
) -> Result<Corpus> {
    let indices = stratified_subset_indices(corpus, fraction, key, seed)?;
    corpus.select(&indices)
}

/// Parameters of the subset-then-two-stage split.
///
/// Stage 1 sends `stage1_train_fraction` of each stratum to train and holds
/// out the rest; stage 2 sends `stage2_train_fraction` of the held-out part
/// to test and the remainder to validation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitProtocol {
    pub subset_fraction: f64,
    pub strata_key: StrataKey,
    pub stage1_train_fraction: f64,
    pub stage2_train_fraction: f64,
    pub seed: u64,
}

impl Default for SplitProtocol {
    fn default() -> Self {
        SplitProtocol {
            subset_fraction: 1.0,
            strata_key: StrataKey::QuestionTemplate,
            stage1_train_fraction: 0.9,
            stage2_train_fraction: 0.9,
            seed: 42,
        }
    }
}

impl SplitProtocol {
    pub fn validate(&self) -> Result<()> {
        if !(self.subset_fraction > 0.0 && self.subset_fraction <= 1.0) {
            return Err(Error::Parameter(format!(
                "subset_fraction must be in (0, 1], got {}",
                self.subset_fraction
            )));
        }
        for (name, value) in [
            ("stage1_train_fraction", self.stage1_train_fraction),
            ("stage2_train_fraction", self.stage2_train_fraction),
        ] {
            if !(value > 0.0 && value < 1.0) {
                return Err(Error::Parameter(format!(
                    "{name} must be in (0, 1), got {value}"
                )));
            }
        }
        Ok(())
    }
}

/// One of the three output splits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Validation,
    Test,
}

impl Split {
    pub const ALL: [Split; 3] = [Split::Train, Split::Validation, Split::Test];
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Split::Train => write!(f, "train"),
            Split::Validation => write!(f, "validation"),
            Split::Test => write!(f, "test"),
        }
    }
}

/// Assignment of every subset member (by corpus row index) to one split.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitAssignment {
    assignments: BTreeMap<usize, Split>,
    protocol: SplitProtocol,
    checksum: String,
}

impl SplitAssignment {
    pub fn protocol(&self) -> &SplitProtocol {
        &self.protocol
    }

    /// SHA-256 over the canonical member index lists of all three splits.
    pub fn checksum(&self) -> &str {
        &self.checksum
    }

    pub fn split_of(&self, row_index: usize) -> Option<Split> {
        self.assignments.get(&row_index).copied()
    }

    /// Ascending row indices of one split.
    pub fn members(&self, split: Split) -> Vec<usize> {
        self.assignments
            .iter()
            .filter(|(_, &s)| s == split)
            .map(|(&i, _)| i)
            .collect()
    }

    /// Total number of assigned members.
    pub fn len(&self) -> usize {
        self.assignments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignments.is_empty()
    }

    /// Per-split manifest suitable for writing next to a run.
    pub fn manifest(&self, corpus: &Corpus, split: Split) -> SplitManifest {
        let members = self
            .members(split)
            .into_iter()
            .map(|row_index| SplitMember {
                row_index,
                image_id: corpus.triplets()[row_index].image_id.clone(),
            })
            .collect();
        SplitManifest {
            split,
            protocol: self.protocol,
            members,
            checksum: self.checksum.clone(),
        }
    }
}

/// Membership list for one split, with the protocol echoed verbatim.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitManifest {
    pub split: Split,
    pub protocol: SplitProtocol,
    pub members: Vec<SplitMember>,
    pub checksum: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitMember {
    pub row_index: usize,
    pub image_id: String,
}

/// Subset then split the corpus per `protocol`.
///
/// Per stratum, the subset members are shuffled on the stream derived from
/// `(seed, "split|" + stratum)`; the first `round_half_up(f1 * n)` go to
/// train, the first `round_half_up(f2 * h)` of the held-out remainder go to
/// test, and the rest to validation.
pub fn split_corpus(corpus: &Corpus, protocol: &SplitProtocol) -> Result<SplitAssignment> {
    protocol.validate()?;
    let subset = stratified_subset_indices(
        corpus,
        protocol.subset_fraction,
        protocol.strata_key,
        protocol.seed,
    )?;
    if subset.len() < 3 {
        return Err(Error::DegenerateSplit {
            members: subset.len(),
        });
    }

    let mut assignments = BTreeMap::new();
    for (label, mut members) in
        group_by_stratum(corpus, subset.iter().copied(), protocol.strata_key)
    {
        let mut stream = SeededStream::derive(protocol.seed, &format!("split|{label}"));
        stream.shuffle(&mut members);

        let n = members.len();
        let train_end = round_half_up_count(protocol.stage1_train_fraction, n).min(n);
        let held = &members[train_end..];
        let test_end =
            round_half_up_count(protocol.stage2_train_fraction, held.len()).min(held.len());

        for &i in &members[..train_end] {
            assignments.insert(i, Split::Train);
        }
        for &i in &held[..test_end] {
            assignments.insert(i, Split::Test);
        }
        for &i in &held[test_end..] {
            assignments.insert(i, Split::Validation);
        }
    }

    let checksum = assignment_checksum(&assignments);
    Ok(SplitAssignment {
        assignments,
        protocol: *protocol,
        checksum,
    })
}

fn round_half_up_count(fraction: f64, size: usize) -> usize {
    (fraction * size as f64 + 0.5).floor() as usize
}

fn assignment_checksum(assignments: &BTreeMap<usize, Split>) -> String {
    let mut canonical = String::new();
    for split in Split::ALL {
        canonical.push_str(&format!("{split}:"));
        for (&i, &s) in assignments.iter() {
            if s == split {
                canonical.push_str(&format!("{i},"));
            }
        }
        canonical.push(';');
    }
    sha256_hex(canonical.as_bytes())
}
