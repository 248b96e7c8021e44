//! Model-free answer predictors so the evaluation pipeline closes end to end.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::fsio::write_atomic;
use crate::predictions::{to_jsonl, PredictionRecord};

/// A fitted predictor. `Constant` always answers the same string;
/// `MajorityPerTemplate` answers each known question with its most frequent
/// training answer and falls back to the overall majority answer otherwise.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Predictor {
    Constant {
        answer: String,
    },
    MajorityPerTemplate {
        table: BTreeMap<String, String>,
        global_fallback: String,
    },
}

impl Predictor {
    pub fn constant(answer: impl Into<String>) -> Result<Predictor> {
        let answer = answer.into();
        if answer.trim().is_empty() {
            return Err(Error::Parameter("constant answer must be non-empty".into()));
        }
        Ok(Predictor::Constant { answer })
    }

    /// Answer a question. Pure lookup; never fails.
    pub fn predict(&self, question: &str) -> &str {
        match self {
            Predictor::Constant { answer } => answer,
            Predictor::MajorityPerTemplate {
                table,
                global_fallback,
            } => table
                .get(question.trim())
                .map(String::as_str)
                .unwrap_or(global_fallback),
        }
    }
}

/// Most frequent value; ties resolve to the lexicographically smallest key.
fn majority(counts: &BTreeMap<&str, u64>) -> Option<String> {
    counts
        .iter()
        .max_by(|a, b| a.1.cmp(b.1).then_with(|| b.0.cmp(a.0)))
        .map(|(&answer, _)| answer.to_string())
}

/// Fit the per-template majority baseline on a training corpus.
pub fn fit_majority_baseline(train: &Corpus) -> Result<Predictor> {
    if train.is_empty() {
        return Err(Error::Fit("training corpus is empty".into()));
    }
    let mut per_template: BTreeMap<&str, BTreeMap<&str, u64>> = BTreeMap::new();
    let mut global: BTreeMap<&str, u64> = BTreeMap::new();
    for t in train.iter() {
        *per_template
            .entry(t.question.as_str())
            .or_default()
            .entry(t.answer.as_str())
            .or_insert(0) += 1;
        *global.entry(t.answer.as_str()).or_insert(0) += 1;
    }
    let table = per_template
        .into_iter()
        .map(|(q, counts)| (q.to_string(), majority(&counts).expect("non-empty group")))
        .collect();
    Ok(Predictor::MajorityPerTemplate {
        table,
        global_fallback: majority(&global).expect("non-empty corpus"),
    })
}

/// Predict every triplet of `split` in corpus order.
pub fn predict_split(predictor: &Predictor, split: &Corpus) -> Vec<PredictionRecord> {
    split
        .iter()
        .map(|t| PredictionRecord {
            image_id: t.image_id.clone(),
            question: t.question.clone(),
            prediction: predictor.predict(&t.question).to_string(),
        })
        .collect()
}

/// Write predictions for `split` as JSONL at `path`, one line per triplet in
/// corpus order. Returns the number of lines written.
pub fn run_baseline(predictor: &Predictor, split: &Corpus, path: &Path) -> Result<usize> {
    if split.is_empty() {
        return Err(Error::EmptyCorpus(
            "cannot run a baseline on an empty split".into(),
        ));
    }
    let records = predict_split(predictor, split);
    write_atomic(path, to_jsonl(&records).as_bytes())?;
    Ok(records.len())
}
