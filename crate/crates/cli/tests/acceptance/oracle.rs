//! Naive from-definition scorers for the acceptance suite. They share no
//! counting or search code with the library: ROUGE overlaps come from
//! explicit window lists, LCS from bare recursion, and METEOR from
//! exhaustive alignment enumeration.

use gi_vqa_core::textnorm::porter_stem;

pub fn prf(overlap: f64, cand_total: f64, ref_total: f64) -> (f64, f64, f64) {
    let precision = if cand_total == 0.0 {
        0.0
    } else {
        overlap / cand_total
    };
    let recall = if ref_total == 0.0 {
        0.0
    } else {
        overlap / ref_total
    };
    let f1 = if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    };
    (precision, recall, f1)
}

fn windows<'a>(tokens: &[&'a str], n: usize) -> Vec<Vec<&'a str>> {
    if n == 0 || tokens.len() < n {
        return Vec::new();
    }
    (0..=tokens.len() - n)
        .map(|i| tokens[i..i + n].to_vec())
        .collect()
}

/// Multiset overlap by marking off reference windows one at a time.
fn window_overlap(cand: &[Vec<&str>], reference: &[Vec<&str>]) -> usize {
    let mut used = vec![false; reference.len()];
    let mut overlap = 0;
    for c in cand {
        for (j, r) in reference.iter().enumerate() {
            if !used[j] && c == r {
                used[j] = true;
                overlap += 1;
                break;
            }
        }
    }
    overlap
}

pub fn naive_rouge_n(cand: &[&str], reference: &[&str], n: usize) -> (f64, f64, f64) {
    let cw = windows(cand, n);
    let rw = windows(reference, n);
    prf(
        window_overlap(&cw, &rw) as f64,
        cw.len() as f64,
        rw.len() as f64,
    )
}

/// Plain recursive LCS, no table.
pub fn naive_lcs(a: &[&str], b: &[&str]) -> usize {
    if a.is_empty() || b.is_empty() {
        0
    } else if a[a.len() - 1] == b[b.len() - 1] {
        1 + naive_lcs(&a[..a.len() - 1], &b[..b.len() - 1])
    } else {
        naive_lcs(&a[..a.len() - 1], b).max(naive_lcs(a, &b[..b.len() - 1]))
    }
}

pub fn naive_rouge_l(cand: &[&str], reference: &[&str]) -> (f64, f64, f64) {
    prf(
        naive_lcs(cand, reference) as f64,
        cand.len() as f64,
        reference.len() as f64,
    )
}

pub fn naive_bleu_corpus(pairs: &[(Vec<&str>, Vec<&str>)], max_n: usize) -> f64 {
    let mut clipped = vec![0usize; max_n];
    let mut totals = vec![0usize; max_n];
    let mut cand_len = 0u64;
    let mut ref_len = 0u64;
    for (cand, reference) in pairs {
        cand_len += cand.len() as u64;
        ref_len += reference.len() as u64;
        for n in 1..=max_n {
            let cw = windows(cand, n);
            let rw = windows(reference, n);
            clipped[n - 1] += window_overlap(&cw, &rw);
            totals[n - 1] += cw.len();
        }
    }
    let mut log_sum = 0.0f64;
    for i in 0..max_n {
        let p = if totals[i] == 0 {
            0.0
        } else {
            clipped[i] as f64 / totals[i] as f64
        };
        if p == 0.0 {
            return 0.0;
        }
        log_sum += p.ln();
    }
    let geometric_mean = (log_sum / max_n as f64).exp();
    let bp = if cand_len == 0 {
        0.0
    } else if cand_len < ref_len {
        (1.0 - ref_len as f64 / cand_len as f64).exp()
    } else {
        1.0
    };
    bp * geometric_mean
}

/// Every injective partial map over compatible pairs, the hard way.
fn all_matchings(
    cand_positions: &[usize],
    ref_positions: &[usize],
    compatible: &dyn Fn(usize, usize) -> bool,
) -> Vec<Vec<(usize, usize)>> {
    fn recurse(
        k: usize,
        cand_positions: &[usize],
        ref_positions: &[usize],
        compatible: &dyn Fn(usize, usize) -> bool,
        used: &mut Vec<usize>,
        acc: &mut Vec<(usize, usize)>,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        if k == cand_positions.len() {
            out.push(acc.clone());
            return;
        }
        let i = cand_positions[k];
        recurse(
            k + 1,
            cand_positions,
            ref_positions,
            compatible,
            used,
            acc,
            out,
        );
        for &j in ref_positions {
            if !used.contains(&j) && compatible(i, j) {
                used.push(j);
                acc.push((i, j));
                recurse(
                    k + 1,
                    cand_positions,
                    ref_positions,
                    compatible,
                    used,
                    acc,
                    out,
                );
                acc.pop();
                used.pop();
            }
        }
    }
    let mut out = Vec::new();
    recurse(
        0,
        cand_positions,
        ref_positions,
        compatible,
        &mut Vec::new(),
        &mut Vec::new(),
        &mut out,
    );
    out
}

fn chunk_count(alignment: &[(usize, usize)]) -> usize {
    let mut pairs = alignment.to_vec();
    pairs.sort_unstable();
    let mut chunks = 0;
    let mut prev: Option<(usize, usize)> = None;
    for (i, j) in pairs {
        if prev != Some((i.wrapping_sub(1), j.wrapping_sub(1))) {
            chunks += 1;
        }
        prev = Some((i, j));
    }
    chunks
}

/// Exhaustive staged METEOR alignment: maximum exact matchings first, then
/// maximum stem matchings over each leftover set; among the largest combined
/// alignments, the fewest chunks win.
pub fn exhaustive_meteor_alignment(cand: &[&str], reference: &[&str]) -> (usize, usize) {
    let cand_stems: Vec<String> = cand.iter().map(|t| porter_stem(t)).collect();
    let ref_stems: Vec<String> = reference.iter().map(|t| porter_stem(t)).collect();
    let all_cand: Vec<usize> = (0..cand.len()).collect();
    let all_ref: Vec<usize> = (0..reference.len()).collect();

    let exact = all_matchings(&all_cand, &all_ref, &|i, j| cand[i] == reference[j]);
    let max_exact = exact.iter().map(Vec::len).max().unwrap_or(0);
    let exact: Vec<_> = exact.into_iter().filter(|m| m.len() == max_exact).collect();

    let mut alignments: Vec<Vec<(usize, usize)>> = Vec::new();
    for m1 in &exact {
        let used_c: Vec<usize> = m1.iter().map(|&(i, _)| i).collect();
        let used_r: Vec<usize> = m1.iter().map(|&(_, j)| j).collect();
        let rest_c: Vec<usize> = all_cand
            .iter()
            .copied()
            .filter(|i| !used_c.contains(i))
            .collect();
        let rest_r: Vec<usize> = all_ref
            .iter()
            .copied()
            .filter(|j| !used_r.contains(j))
            .collect();
        let stem = all_matchings(&rest_c, &rest_r, &|i, j| cand_stems[i] == ref_stems[j]);
        let max_stem = stem.iter().map(Vec::len).max().unwrap_or(0);
        for m2 in stem.into_iter().filter(|m| m.len() == max_stem) {
            let mut combined = m1.clone();
            combined.extend(m2);
            alignments.push(combined);
        }
    }

    let max_size = alignments.iter().map(Vec::len).max().unwrap_or(0);
    let chunks = alignments
        .iter()
        .filter(|a| a.len() == max_size)
        .map(|a| chunk_count(a))
        .min()
        .unwrap_or(0);
    (max_size, chunks)
}

/// Same closing formula as the engine; only (matches, chunks) comes from the
/// exhaustive search above.
pub fn naive_meteor_score(
    cand: &[&str],
    reference: &[&str],
    alpha: f64,
    beta: f64,
    gamma: f64,
) -> f64 {
    let (matches, chunks) = exhaustive_meteor_alignment(cand, reference);
    if matches == 0 {
        return 0.0;
    }
    let m = matches as f64;
    let precision = m / cand.len() as f64;
    let recall = m / reference.len() as f64;
    let f_mean = precision * recall / (alpha * precision + (1.0 - alpha) * recall);
    let fragmentation = chunks as f64 / m;
    let penalty = gamma * fragmentation.powf(beta);
    f_mean * (1.0 - penalty)
}
