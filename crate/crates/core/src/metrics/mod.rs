//! BLEU, ROUGE-1/2/L, and METEOR engines with corpus-level aggregation.
//!
//! All metrics share the tokenizer from [`crate::textnorm`]. BLEU is pooled
//! over the corpus (clipped n-gram counts summed before the geometric mean);
//! ROUGE and METEOR are arithmetic means of per-pair scores. Aggregation is a
//! fixed-order sequential reduction, so reports are bit-reproducible.

mod bleu;
mod meteor;
mod rouge;

pub use bleu::bleu_corpus;
pub use meteor::{meteor_alignment, meteor_pair, MeteorAlignment};
pub use rouge::{rouge_l_pair, rouge_n_pair, PrfScore};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::textnorm::{tokenize, TokenSequence};

/// Numerator substituted for a zero clipped count under
/// [`BleuSmoothing::AddEpsilon`].
pub const BLEU_EPSILON: f64 = 1e-9;

/// How zero clipped n-gram counts are treated in BLEU.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum BleuSmoothing {
    /// Any zero pooled precision makes the corpus score 0.
    #[default]
    None,
    /// Zero clipped counts are replaced by [`BLEU_EPSILON`] (orders with no
    /// n-grams at all still zero the score).
    AddEpsilon,
}

/// METEOR matching stages, applied in order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeteorStage {
    /// Surface-form equality.
    Exact,
    /// Porter-stem equality among tokens left unmatched by earlier stages.
    Stem,
}

/// Metric hyperparameters. The defaults reproduce the conventional
/// evaluation-harness behavior: BLEU-4 unsmoothed, unstemmed ROUGE, and
/// METEOR with alpha 0.9, beta 3, gamma 0.5 over exact+stem matching.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MetricConfig {
    pub bleu_max_n: usize,
    pub bleu_smoothing: BleuSmoothing,
    pub rouge_use_stemmer: bool,
    pub meteor_alpha: f64,
    pub meteor_beta: f64,
    pub meteor_gamma: f64,
    pub meteor_stages: Vec<MeteorStage>,
}

impl Default for MetricConfig {
    fn default() -> Self {
        MetricConfig {
            bleu_max_n: 4,
            bleu_smoothing: BleuSmoothing::None,
            rouge_use_stemmer: false,
            meteor_alpha: 0.9,
            meteor_beta: 3.0,
            meteor_gamma: 0.5,
            meteor_stages: vec![MeteorStage::Exact, MeteorStage::Stem],
        }
    }
}

impl MetricConfig {
    pub fn validate(&self) -> Result<()> {
        if self.bleu_max_n < 1 {
            return Err(Error::Parameter("bleu_max_n must be at least 1".into()));
        }
        if !(self.meteor_alpha > 0.0 && self.meteor_alpha < 1.0) {
            return Err(Error::Parameter(format!(
                "meteor_alpha must be in (0, 1), got {}",
                self.meteor_alpha
            )));
        }
        if self.meteor_beta <= 0.0 {
            return Err(Error::Parameter(format!(
                "meteor_beta must be positive, got {}",
                self.meteor_beta
            )));
        }
        if !(0.0..=1.0).contains(&self.meteor_gamma) {
            return Err(Error::Parameter(format!(
                "meteor_gamma must be in [0, 1], got {}",
                self.meteor_gamma
            )));
        }
        Ok(())
    }
}

/// Per-pair scores for the mean-aggregated metrics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairScore {
    pub rouge1_f: f64,
    pub rouge2_f: f64,
    #[serde(rename = "rougeL_f")]
    pub rouge_l_f: f64,
    pub meteor: f64,
}

/// The five-column corpus-level result row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub bleu: f64,
    pub rouge1: f64,
    pub rouge2: f64,
    #[serde(rename = "rougeL")]
    pub rouge_l: f64,
    pub meteor: f64,
    pub n_pairs: usize,
    pub config: MetricConfig,
}

/// Score one candidate/reference pair of raw texts.
pub fn score_pair(candidate: &str, reference: &str, config: &MetricConfig) -> Result<PairScore> {
    config.validate()?;
    let cand = tokenize(candidate);
    let reference = tokenize(reference);
    score_tokenized(&cand, &reference, config)
}

fn score_tokenized(
    cand: &TokenSequence,
    reference: &TokenSequence,
    config: &MetricConfig,
) -> Result<PairScore> {
    Ok(PairScore {
        rouge1_f: rouge_n_pair(cand, reference, 1, config)?.f1,
        rouge2_f: rouge_n_pair(cand, reference, 2, config)?.f1,
        rouge_l_f: rouge_l_pair(cand, reference, config).f1,
        meteor: meteor_pair(cand, reference, config),
    })
}

/// Tokenize and score a whole corpus of (candidate, reference) text pairs.
///
/// BLEU is corpus-level; the other four columns are arithmetic means of the
/// per-pair scores, accumulated in pair order.
pub fn evaluate_corpus<C: AsRef<str>, R: AsRef<str>>(
    pairs: &[(C, R)],
    config: &MetricConfig,
) -> Result<MetricReport> {
    config.validate()?;
    if pairs.is_empty() {
        return Err(Error::Parameter(
            "at least one candidate/reference pair is required".into(),
        ));
    }
    let tokenized: Vec<(TokenSequence, TokenSequence)> = pairs
        .iter()
        .map(|(c, r)| (tokenize(c.as_ref()), tokenize(r.as_ref())))
        .collect();
    let candidates: Vec<TokenSequence> = tokenized.iter().map(|(c, _)| c.clone()).collect();
    let references: Vec<TokenSequence> = tokenized.iter().map(|(_, r)| r.clone()).collect();

    let bleu = bleu_corpus(&candidates, &references, config)?;

    let mut sums = [0.0f64; 4];
    for (cand, reference) in &tokenized {
        let s = score_tokenized(cand, reference, config)?;
        sums[0] += s.rouge1_f;
        sums[1] += s.rouge2_f;
        sums[2] += s.rouge_l_f;
        sums[3] += s.meteor;
    }
    let n = pairs.len() as f64;
    Ok(MetricReport {
        bleu,
        rouge1: sums[0] / n,
        rouge2: sums[1] / n,
        rouge_l: sums[2] / n,
        meteor: sums[3] / n,
        n_pairs: pairs.len(),
        config: config.clone(),
    })
}
