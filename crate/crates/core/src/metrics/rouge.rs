//! ROUGE-N (n-gram overlap) and ROUGE-L (longest common subsequence).

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::textnorm::{lcs_length, ngrams, TokenSequence};

use super::MetricConfig;

/// Precision / recall / F1 triple; any division by zero yields 0 for that
/// component.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrfScore {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

fn prf(overlap: f64, candidate_total: f64, reference_total: f64) -> PrfScore {
    let precision = if candidate_total == 0.0 {
        0.0
    } else {
        overlap / candidate_total
    };
    let recall = if reference_total == 0.0 {
        0.0
    } else {
        overlap / reference_total
    };
    let f1 = if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    };
    PrfScore {
        precision,
        recall,
        f1,
    }
}

fn normalized(seq: &TokenSequence, config: &MetricConfig) -> TokenSequence {
    if config.rouge_use_stemmer {
        seq.stemmed()
    } else {
        seq.clone()
    }
}

/// ROUGE-N: multiset n-gram overlap between candidate and reference.
pub fn rouge_n_pair(
    candidate: &TokenSequence,
    reference: &TokenSequence,
    n: usize,
    config: &MetricConfig,
) -> Result<PrfScore> {
    let candidate = normalized(candidate, config);
    let reference = normalized(reference, config);
    let cand_grams = ngrams(&candidate, n)?;
    let ref_grams = ngrams(&reference, n)?;
    let overlap = cand_grams.intersection_count(&ref_grams) as f64;
    Ok(prf(
        overlap,
        cand_grams.total() as f64,
        ref_grams.total() as f64,
    ))
}

/// ROUGE-L: longest common subsequence over the token sequences.
pub fn rouge_l_pair(
    candidate: &TokenSequence,
    reference: &TokenSequence,
    config: &MetricConfig,
) -> PrfScore {
    let candidate = normalized(candidate, config);
    let reference = normalized(reference, config);
    let lcs = lcs_length(&candidate, &reference) as f64;
    prf(lcs, candidate.len() as f64, reference.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(text: &str) -> TokenSequence {
        TokenSequence::from_words(&text.split(' ').collect::<Vec<_>>())
    }

    #[test]
    fn identical_sequences_are_all_ones() {
        let s = seq("polyp in the colon");
        for n in 1..=4 {
            let score = rouge_n_pair(&s, &s, n, &MetricConfig::default()).unwrap();
            assert_eq!((score.precision, score.recall, score.f1), (1.0, 1.0, 1.0));
        }
        let score = rouge_l_pair(&s, &s, &MetricConfig::default());
        assert_eq!((score.precision, score.recall, score.f1), (1.0, 1.0, 1.0));
    }

    #[test]
    fn hand_derived_bigram_example() {
        // bigrams: {polyp in, in colon} vs {a polyp, polyp in, in the, the colon}
        let c = seq("polyp in colon");
        let r = seq("a polyp in the colon");
        let score = rouge_n_pair(&c, &r, 2, &MetricConfig::default()).unwrap();
        assert!((score.precision - 0.5).abs() < 1e-12);
        assert!((score.recall - 0.25).abs() < 1e-12);
        assert!((score.f1 - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn hand_derived_lcs_example() {
        let c = seq("polyp in colon");
        let r = seq("a polyp in the colon");
        let score = rouge_l_pair(&c, &r, &MetricConfig::default());
        assert_eq!(score.precision, 1.0);
        assert!((score.recall - 0.6).abs() < 1e-12);
        assert!((score.f1 - 0.75).abs() < 1e-9);
    }

    #[test]
    fn disjoint_and_empty_inputs_are_zero() {
        let c = seq("ulcer visible");
        let r = seq("normal tissue");
        let score = rouge_n_pair(&c, &r, 1, &MetricConfig::default()).unwrap();
        assert_eq!((score.precision, score.recall, score.f1), (0.0, 0.0, 0.0));

        let empty = TokenSequence::default();
        let score = rouge_l_pair(&empty, &r, &MetricConfig::default());
        assert_eq!((score.precision, score.recall, score.f1), (0.0, 0.0, 0.0));
    }

    #[test]
    fn stemming_merges_inflected_forms() {
        let c = seq("polyps removed");
        let r = seq("polyp removal");
        let plain = rouge_n_pair(&c, &r, 1, &MetricConfig::default()).unwrap();
        assert_eq!(plain.f1, 0.0);
        let stemmed_config = MetricConfig {
            rouge_use_stemmer: true,
            ..MetricConfig::default()
        };
        let stemmed = rouge_n_pair(&c, &r, 1, &stemmed_config).unwrap();
        // polyps/polyp stem to "polyp", removed/removal both stem to "remov"
        assert_eq!(stemmed.f1, 1.0);
    }
}
