//! Corpus-level BLEU: clipped modified n-gram precisions pooled over all
//! pairs, uniform-weight geometric mean, times the brevity penalty.

use crate::error::{Error, Result};
use crate::textnorm::{ngrams, TokenSequence};

use super::{BleuSmoothing, MetricConfig, BLEU_EPSILON};

/// Corpus BLEU with a single reference per candidate.
///
/// Returns 0 when any pooled precision is zero and smoothing is off; in
/// particular a corpus of single-token pairs scores exactly 0 under the
/// default `bleu_max_n = 4` because no higher-order n-grams exist.
pub fn bleu_corpus(
    candidates: &[TokenSequence],
    references: &[TokenSequence],
    config: &MetricConfig,
) -> Result<f64> {
    config.validate()?;
    if candidates.is_empty() {
        return Err(Error::Parameter(
            "at least one candidate/reference pair is required".into(),
        ));
    }
    if candidates.len() != references.len() {
        return Err(Error::Pairing {
            candidates: candidates.len(),
            references: references.len(),
        });
    }

    let max_n = config.bleu_max_n;
    let mut clipped = vec![0u64; max_n];
    let mut totals = vec![0u64; max_n];
    let mut candidate_len = 0u64;
    let mut reference_len = 0u64;

    for (cand, reference) in candidates.iter().zip(references) {
        candidate_len += cand.len() as u64;
        reference_len += reference.len() as u64;
        for n in 1..=max_n {
            let cand_grams = ngrams(cand, n)?;
            let ref_grams = ngrams(reference, n)?;
            clipped[n - 1] += cand_grams.intersection_count(&ref_grams) as u64;
            totals[n - 1] += cand_grams.total() as u64;
        }
    }

    let mut log_sum = 0.0f64;
    for order in 0..max_n {
        let precision = if totals[order] == 0 {
            0.0
        } else if clipped[order] == 0 {
            match config.bleu_smoothing {
                BleuSmoothing::None => 0.0,
                BleuSmoothing::AddEpsilon => BLEU_EPSILON / totals[order] as f64,
            }
        } else {
            clipped[order] as f64 / totals[order] as f64
        };
        if precision == 0.0 {
            return Ok(0.0);
        }
        log_sum += precision.ln();
    }

    let geometric_mean = (log_sum / max_n as f64).exp();
    Ok(brevity_penalty(candidate_len, reference_len) * geometric_mean)
}

/// `exp(1 - r/c)` when the candidate side is shorter, else 1; empty candidate
/// side scores 0.
pub fn brevity_penalty(candidate_len: u64, reference_len: u64) -> f64 {
    if candidate_len == 0 {
        0.0
    } else if candidate_len < reference_len {
        (1.0 - reference_len as f64 / candidate_len as f64).exp()
    } else {
        1.0
    }
}
