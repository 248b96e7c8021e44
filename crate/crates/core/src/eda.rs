//! Corpus profiling: answer frequency ranking, answer-length histogram, and
//! first-word question typing with per-type metric reports.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::metrics::{evaluate_corpus, MetricConfig, MetricReport};
use crate::textnorm::{is_punctuation_token, tokenize};

/// Ranked answer counts, descending by count and ascending lexicographically
/// on ties. Matching is exact on the whitespace-trimmed answer string; case
/// is preserved.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnswerFrequencyTable {
    pub entries: Vec<(String, u64)>,
}

impl AnswerFrequencyTable {
    /// Sum of the listed counts.
    pub fn total(&self) -> u64 {
        self.entries.iter().map(|(_, c)| c).sum()
    }
}

/// The `top_k` most frequent answers. Pass `usize::MAX` for the full table,
/// whose counts then sum to the corpus size.
pub fn answer_frequency(corpus: &Corpus, top_k: usize) -> Result<AnswerFrequencyTable> {
    if top_k == 0 {
        return Err(Error::Parameter("top_k must be at least 1".into()));
    }
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus(
            "cannot rank answers of an empty corpus".into(),
        ));
    }
    let mut counts: BTreeMap<&str, u64> = BTreeMap::new();
    for t in corpus.iter() {
        *counts.entry(t.answer.trim()).or_insert(0) += 1;
    }
    let mut entries: Vec<(String, u64)> = counts
        .into_iter()
        .map(|(a, c)| (a.to_string(), c))
        .collect();
    entries.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    entries.truncate(top_k);
    Ok(AnswerFrequencyTable { entries })
}

/// Map from answer length in non-punctuation tokens to count. A length of 0
/// can only come from punctuation-only answers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct LengthHistogram {
    pub counts: BTreeMap<usize, u64>,
}

impl LengthHistogram {
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    /// Most frequent length; ties resolve to the smaller length.
    pub fn mode(&self) -> Option<usize> {
        self.counts
            .iter()
            .max_by(|a, b| a.1.cmp(b.1).then_with(|| b.0.cmp(a.0)))
            .map(|(&len, _)| len)
    }
}

/// Histogram of answer word lengths over the whole corpus.
pub fn answer_length_histogram(corpus: &Corpus) -> LengthHistogram {
    let mut counts: BTreeMap<usize, u64> = BTreeMap::new();
    for t in corpus.iter() {
        let length = tokenize(&t.answer)
            .iter()
            .filter(|tok| !is_punctuation_token(tok))
            .count();
        *counts.entry(length).or_insert(0) += 1;
    }
    LengthHistogram { counts }
}

/// First-word question type: the lowercase first non-punctuation token.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct QuestionTypeKey(pub String);

impl fmt::Display for QuestionTypeKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub fn question_type_of(question: &str) -> Result<QuestionTypeKey> {
    tokenize(question)
        .iter()
        .find(|tok| !is_punctuation_token(tok))
        .map(|tok| QuestionTypeKey(tok.clone()))
        .ok_or_else(|| Error::Classification(question.to_string()))
}

/// Evaluate (candidate, reference) pairs grouped by question type.
///
/// Groups keep the incoming pair order, so a single-type input reproduces
/// the unstratified report bit for bit. Output rows are ordered by
/// descending group size, then ascending type key.
pub fn stratified_metric_report<Q, C, R>(
    pairs: &[(Q, C, R)],
    config: &MetricConfig,
) -> Result<Vec<(QuestionTypeKey, MetricReport)>>
where
    Q: AsRef<str>,
    C: AsRef<str>,
    R: AsRef<str>,
{
    if pairs.is_empty() {
        return Err(Error::Parameter(
            "at least one (question, candidate, reference) pair is required".into(),
        ));
    }
    let mut groups: BTreeMap<QuestionTypeKey, Vec<(&str, &str)>> = BTreeMap::new();
    for (question, candidate, reference) in pairs {
        let key = question_type_of(question.as_ref())?;
        groups
            .entry(key)
            .or_default()
            .push((candidate.as_ref(), reference.as_ref()));
    }
    let mut rows: Vec<(QuestionTypeKey, MetricReport)> = groups
        .into_iter()
        .map(|(key, group)| Ok((key, evaluate_corpus(&group, config)?)))
        .collect::<Result<_>>()?;
    rows.sort_by(|a, b| b.1.n_pairs.cmp(&a.1.n_pairs).then_with(|| a.0.cmp(&b.0)));
    Ok(rows)
}
