//! METEOR: staged unigram alignment with a fragmentation penalty.
//!
//! Matching runs in stages (exact surface forms first, then Porter-stem
//! equality among the leftovers). Each stage matches as many tokens as it
//! can; among all alignments that reach the stage-wise maximum, the scorer
//! picks one minimizing the number of chunks — maximal runs of matches that
//! are contiguous and in order on both sides. The search is a deterministic
//! backtracking over candidate positions (reference positions tried left to
//! right) with branch-and-bound pruning and a node budget; within the budget
//! the chunk count is exactly minimal, beyond it the best alignment found so
//! far is kept.

use std::collections::HashMap;

use crate::textnorm::{porter_stem, TokenSequence};

use super::{MeteorStage, MetricConfig};

/// Alignment summary: number of matched unigrams and chunk count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MeteorAlignment {
    pub matches: usize,
    pub chunks: usize,
}

/// Nodes explored before the search settles for the best alignment found.
const NODE_BUDGET: u64 = 1_000_000;

/// METEOR score of one pair under `config`.
///
/// `F_mean = P*R / (alpha*P + (1-alpha)*R)` over unigram precision and
/// recall, scaled by `1 - gamma * (chunks/matches)^beta`. No matches, or an
/// empty side, scores 0.
pub fn meteor_pair(
    candidate: &TokenSequence,
    reference: &TokenSequence,
    config: &MetricConfig,
) -> f64 {
    let alignment = meteor_alignment(candidate, reference, &config.meteor_stages);
    if alignment.matches == 0 {
        return 0.0;
    }
    let m = alignment.matches as f64;
    let precision = m / candidate.len() as f64;
    let recall = m / reference.len() as f64;
    let f_mean = precision * recall
        / (config.meteor_alpha * precision + (1.0 - config.meteor_alpha) * recall);
    let fragmentation = alignment.chunks as f64 / m;
    let penalty = config.meteor_gamma * fragmentation.powf(config.meteor_beta);
    f_mean * (1.0 - penalty)
}

/// Compute the staged alignment and its minimal chunk count.
pub fn meteor_alignment(
    candidate: &TokenSequence,
    reference: &TokenSequence,
    stages: &[MeteorStage],
) -> MeteorAlignment {
    if candidate.is_empty() || reference.is_empty() || stages.is_empty() {
        return MeteorAlignment {
            matches: 0,
            chunks: 0,
        };
    }
    let use_exact = stages.contains(&MeteorStage::Exact);
    let use_stem = stages.contains(&MeteorStage::Stem);

    let problem = Problem::build(candidate, reference, use_exact, use_stem);
    let matches = problem.total_quota();
    if matches == 0 {
        return MeteorAlignment {
            matches: 0,
            chunks: 0,
        };
    }
    let chunks = Search::new(&problem).run();
    MeteorAlignment { matches, chunks }
}

/// Token and stem class structure of one pair, with per-class match quotas.
///
/// Every maximal staged alignment matches, per surface form, exactly
/// `min(candidate count, reference count)` tokens exactly, and per stem
/// class, the minimum of the leftover counts by stem. The search below only
/// decides which positions realize those quotas.
struct Problem {
    cand_tok: Vec<u32>,
    cand_stem: Vec<u32>,
    ref_tok: Vec<u32>,
    ref_stem: Vec<u32>,
    /// Reference positions per token id, ascending.
    ref_pos_by_tok: HashMap<u32, Vec<usize>>,
    /// Reference positions per stem id, ascending.
    ref_pos_by_stem: HashMap<u32, Vec<usize>>,
    exact_quota: HashMap<u32, usize>,
    stem_quota: HashMap<u32, usize>,
    use_exact: bool,
}

impl Problem {
    fn build(
        candidate: &TokenSequence,
        reference: &TokenSequence,
        use_exact: bool,
        use_stem: bool,
    ) -> Problem {
        let mut tok_ids: HashMap<String, u32> = HashMap::new();
        let mut tok_id_of = |t: &str| -> u32 {
            let next = tok_ids.len() as u32;
            *tok_ids.entry(t.to_string()).or_insert(next)
        };
        let cand_tok: Vec<u32> = candidate.iter().map(|t| tok_id_of(t)).collect();
        let ref_tok: Vec<u32> = reference.iter().map(|t| tok_id_of(t)).collect();

        let mut stem_ids: HashMap<String, u32> = HashMap::new();
        let mut stem_id_of = |t: &str| -> u32 {
            let stem = if use_stem {
                porter_stem(t)
            } else {
                String::new()
            };
            let next = stem_ids.len() as u32;
            *stem_ids.entry(stem).or_insert(next)
        };
        let cand_stem: Vec<u32> = candidate.iter().map(|t| stem_id_of(t)).collect();
        let ref_stem: Vec<u32> = reference.iter().map(|t| stem_id_of(t)).collect();

        let mut cand_count_tok: HashMap<u32, usize> = HashMap::new();
        for &t in &cand_tok {
            *cand_count_tok.entry(t).or_insert(0) += 1;
        }
        let mut ref_count_tok: HashMap<u32, usize> = HashMap::new();
        let mut ref_pos_by_tok: HashMap<u32, Vec<usize>> = HashMap::new();
        for (j, &t) in ref_tok.iter().enumerate() {
            *ref_count_tok.entry(t).or_insert(0) += 1;
            ref_pos_by_tok.entry(t).or_default().push(j);
        }
        let mut ref_pos_by_stem: HashMap<u32, Vec<usize>> = HashMap::new();
        for (j, &s) in ref_stem.iter().enumerate() {
            ref_pos_by_stem.entry(s).or_default().push(j);
        }

        let mut exact_quota: HashMap<u32, usize> = HashMap::new();
        if use_exact {
            for (&t, &c) in &cand_count_tok {
                let r = ref_count_tok.get(&t).copied().unwrap_or(0);
                let q = c.min(r);
                if q > 0 {
                    exact_quota.insert(t, q);
                }
            }
        }

        let mut stem_quota: HashMap<u32, usize> = HashMap::new();
        if use_stem {
            // leftovers per stem class after the exact stage takes its quota
            let mut cand_left: HashMap<u32, usize> = HashMap::new();
            for &s in &cand_stem {
                *cand_left.entry(s).or_insert(0) += 1;
            }
            let mut ref_left: HashMap<u32, usize> = HashMap::new();
            for &s in &ref_stem {
                *ref_left.entry(s).or_insert(0) += 1;
            }
            for (&t, &q) in &exact_quota {
                // all positions of one surface form share a stem
                if let Some(i) = cand_tok.iter().position(|&x| x == t) {
                    *cand_left.get_mut(&cand_stem[i]).expect("stem class") -= q;
                }
                if let Some(j) = ref_tok.iter().position(|&x| x == t) {
                    *ref_left.get_mut(&ref_stem[j]).expect("stem class") -= q;
                }
            }
            for (&s, &c) in &cand_left {
                let r = ref_left.get(&s).copied().unwrap_or(0);
                let q = c.min(r);
                if q > 0 {
                    stem_quota.insert(s, q);
                }
            }
        }

        Problem {
            cand_tok,
            cand_stem,
            ref_tok,
            ref_stem,
            ref_pos_by_tok,
            ref_pos_by_stem,
            exact_quota,
            stem_quota,
            use_exact,
        }
    }

    fn total_quota(&self) -> usize {
        self.exact_quota.values().sum::<usize>() + self.stem_quota.values().sum::<usize>()
    }
}

/// Backtracking state for the chunk-minimizing search.
struct Search<'a> {
    problem: &'a Problem,
    ref_used: Vec<bool>,
    exact_rem: HashMap<u32, usize>,
    stem_rem: HashMap<u32, usize>,
    /// Candidate positions not yet visited, per token id.
    cand_avail_tok: HashMap<u32, usize>,
    /// Sum over a stem class of (available candidate positions - remaining
    /// exact quota); must stay at or above the remaining stem quota.
    cand_surplus: HashMap<u32, isize>,
    /// Unused reference positions per token id.
    ref_avail_tok: HashMap<u32, usize>,
    ref_surplus: HashMap<u32, isize>,
    best: usize,
    nodes: u64,
}

impl<'a> Search<'a> {
    fn new(problem: &'a Problem) -> Search<'a> {
        let mut cand_avail_tok: HashMap<u32, usize> = HashMap::new();
        for &t in &problem.cand_tok {
            *cand_avail_tok.entry(t).or_insert(0) += 1;
        }
        let mut ref_avail_tok: HashMap<u32, usize> = HashMap::new();
        for &t in &problem.ref_tok {
            *ref_avail_tok.entry(t).or_insert(0) += 1;
        }
        let mut cand_surplus: HashMap<u32, isize> = HashMap::new();
        for (i, &s) in problem.cand_stem.iter().enumerate() {
            let t = problem.cand_tok[i];
            let _ = t;
            *cand_surplus.entry(s).or_insert(0) += 1;
        }
        for (&t, &q) in &problem.exact_quota {
            if let Some(i) = problem.cand_tok.iter().position(|&x| x == t) {
                *cand_surplus.get_mut(&problem.cand_stem[i]).unwrap() -= q as isize;
            }
        }
        let mut ref_surplus: HashMap<u32, isize> = HashMap::new();
        for &s in &problem.ref_stem {
            *ref_surplus.entry(s).or_insert(0) += 1;
        }
        for (&t, &q) in &problem.exact_quota {
            if let Some(j) = problem.ref_tok.iter().position(|&x| x == t) {
                *ref_surplus.get_mut(&problem.ref_stem[j]).unwrap() -= q as isize;
            }
        }
        Search {
            problem,
            ref_used: vec![false; problem.ref_tok.len()],
            exact_rem: problem.exact_quota.clone(),
            stem_rem: problem.stem_quota.clone(),
            cand_avail_tok,
            cand_surplus,
            ref_avail_tok,
            ref_surplus,
            best: usize::MAX,
            nodes: 0,
        }
    }

    fn run(mut self) -> usize {
        self.dfs(0, None, 0);
        debug_assert_ne!(self.best, usize::MAX, "search must find an alignment");
        self.best
    }

    fn dfs(&mut self, pos: usize, last: Option<(usize, usize)>, chunks: usize) {
        if self.best == 1 || self.nodes > NODE_BUDGET && self.best != usize::MAX {
            return;
        }
        self.nodes += 1;
        if chunks >= self.best {
            return;
        }
        if pos == self.problem.cand_tok.len() {
            // feasibility bookkeeping guarantees all quotas are consumed here
            self.best = chunks;
            return;
        }

        let token = self.problem.cand_tok[pos];
        let stem = self.problem.cand_stem[pos];

        // exact matches, leftmost reference first
        if self.exact_rem.get(&token).copied().unwrap_or(0) > 0 {
            let positions = self.problem.ref_pos_by_tok[&token].clone();
            for j in positions {
                if self.ref_used[j] {
                    continue;
                }
                self.apply_exact(pos, j);
                let next_chunks = chunks + usize::from(!continues_run(last, pos, j));
                self.dfs(pos + 1, Some((pos, j)), next_chunks);
                self.undo_exact(pos, j);
            }
        }

        // stem matches among leftovers
        if self.stem_rem.get(&stem).copied().unwrap_or(0) > 0 {
            let positions = self.problem.ref_pos_by_stem[&stem].clone();
            for j in positions {
                if self.ref_used[j] {
                    continue;
                }
                let ref_token = self.problem.ref_tok[j];
                if self.problem.use_exact && ref_token == token {
                    continue; // an exact-stage pair, never a stem-stage one
                }
                if !self.stem_match_feasible(token, ref_token) {
                    continue;
                }
                self.apply_stem(pos, j);
                let next_chunks = chunks + usize::from(!continues_run(last, pos, j));
                self.dfs(pos + 1, Some((pos, j)), next_chunks);
                self.undo_stem(pos, j);
            }
        }

        // leave this candidate token unmatched
        if self.skip_feasible(token, stem) {
            self.apply_skip(token, stem);
            self.dfs(pos + 1, last, chunks);
            self.undo_skip(token, stem);
        }
    }

    fn apply_exact(&mut self, pos: usize, j: usize) {
        let token = self.problem.cand_tok[pos];
        self.ref_used[j] = true;
        *self.exact_rem.get_mut(&token).unwrap() -= 1;
        *self.cand_avail_tok.get_mut(&token).unwrap() -= 1;
        *self.ref_avail_tok.get_mut(&token).unwrap() -= 1;
        // surpluses are unchanged: availability and quota fall together
    }

    fn undo_exact(&mut self, pos: usize, j: usize) {
        let token = self.problem.cand_tok[pos];
        self.ref_used[j] = false;
        *self.exact_rem.get_mut(&token).unwrap() += 1;
        *self.cand_avail_tok.get_mut(&token).unwrap() += 1;
        *self.ref_avail_tok.get_mut(&token).unwrap() += 1;
    }

    fn stem_match_feasible(&self, cand_token: u32, ref_token: u32) -> bool {
        // consuming this candidate position must not starve its token's
        // remaining exact quota, and likewise on the reference side
        let cand_ok = self.cand_avail_tok[&cand_token]
            > self.exact_rem.get(&cand_token).copied().unwrap_or(0);
        let ref_ok =
            self.ref_avail_tok[&ref_token] > self.exact_rem.get(&ref_token).copied().unwrap_or(0);
        cand_ok && ref_ok
    }

    fn apply_stem(&mut self, pos: usize, j: usize) {
        let token = self.problem.cand_tok[pos];
        let stem = self.problem.cand_stem[pos];
        let ref_token = self.problem.ref_tok[j];
        self.ref_used[j] = true;
        *self.stem_rem.get_mut(&stem).unwrap() -= 1;
        *self.cand_avail_tok.get_mut(&token).unwrap() -= 1;
        *self.ref_avail_tok.get_mut(&ref_token).unwrap() -= 1;
        *self.cand_surplus.get_mut(&stem).unwrap() -= 1;
        *self.ref_surplus.get_mut(&stem).unwrap() -= 1;
    }

    fn undo_stem(&mut self, pos: usize, j: usize) {
        let token = self.problem.cand_tok[pos];
        let stem = self.problem.cand_stem[pos];
        let ref_token = self.problem.ref_tok[j];
        self.ref_used[j] = false;
        *self.stem_rem.get_mut(&stem).unwrap() += 1;
        *self.cand_avail_tok.get_mut(&token).unwrap() += 1;
        *self.ref_avail_tok.get_mut(&ref_token).unwrap() += 1;
        *self.cand_surplus.get_mut(&stem).unwrap() += 1;
        *self.ref_surplus.get_mut(&stem).unwrap() += 1;
    }

    fn skip_feasible(&self, token: u32, stem: u32) -> bool {
        let exact_ok =
            self.cand_avail_tok[&token] > self.exact_rem.get(&token).copied().unwrap_or(0);
        let stem_ok = self.cand_surplus.get(&stem).copied().unwrap_or(0)
            > self.stem_rem.get(&stem).copied().unwrap_or(0) as isize;
        exact_ok && stem_ok
    }

    fn apply_skip(&mut self, token: u32, stem: u32) {
        *self.cand_avail_tok.get_mut(&token).unwrap() -= 1;
        *self.cand_surplus.get_mut(&stem).unwrap() -= 1;
    }

    fn undo_skip(&mut self, token: u32, stem: u32) {
        *self.cand_avail_tok.get_mut(&token).unwrap() += 1;
        *self.cand_surplus.get_mut(&stem).unwrap() += 1;
    }
}

/// A match extends the current chunk when both sides advance by one.
fn continues_run(last: Option<(usize, usize)>, pos: usize, j: usize) -> bool {
    match last {
        Some((last_pos, last_j)) => pos == last_pos + 1 && j == last_j + 1,
        None => false,
    }
}
