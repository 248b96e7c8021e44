//! Shared text primitives: the one tokenizer every metric uses, n-gram
//! multisets, longest common subsequence, and the Porter stemmer.
//!
//! Tokenizer choice materially affects every downstream score, so there is a
//! single rule set:
//!
//! * the text is Unicode-lowercased,
//! * characters in the Unicode punctuation categories (`P*`) become
//!   standalone one-character tokens, except a `-` with an alphanumeric
//!   character on both sides, which stays inside its word,
//! * everything else splits on Unicode whitespace.

mod porter;

pub use porter::porter_stem;

use std::collections::HashMap;

use unicode_properties::{GeneralCategoryGroup, UnicodeGeneralCategory};

use crate::error::{Error, Result};

/// An ordered sequence of lowercase tokens. Tokens are never empty and never
/// contain whitespace.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct TokenSequence {
    tokens: Vec<String>,
}

impl TokenSequence {
    pub fn from_tokens(tokens: Vec<String>) -> Self {
        debug_assert!(tokens
            .iter()
            .all(|t| !t.is_empty() && !t.chars().any(char::is_whitespace)));
        TokenSequence { tokens }
    }

    pub fn from_words(words: &[&str]) -> Self {
        Self::from_tokens(words.iter().map(|w| w.to_string()).collect())
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, String> {
        self.tokens.iter()
    }

    pub fn join(&self, separator: &str) -> String {
        self.tokens.join(separator)
    }

    /// Sequence with every token replaced by its Porter stem.
    pub fn stemmed(&self) -> TokenSequence {
        TokenSequence {
            tokens: self.tokens.iter().map(|t| porter_stem(t)).collect(),
        }
    }
}

/// True when `c` belongs to a Unicode punctuation category (`P*`).
pub fn is_punctuation_char(c: char) -> bool {
    c.general_category_group() == GeneralCategoryGroup::Punctuation
}

/// True when the token consists entirely of punctuation characters.
pub fn is_punctuation_token(token: &str) -> bool {
    !token.is_empty() && token.chars().all(is_punctuation_char)
}

/// Lowercase and split `text` into tokens.
///
/// Empty or whitespace-only input yields an empty sequence. Re-tokenizing the
/// space-joined output reproduces the same sequence.
pub fn tokenize(text: &str) -> TokenSequence {
    let chars: Vec<char> = text.to_lowercase().chars().collect();
    let mut tokens = Vec::new();
    let mut current = String::new();

    for (i, &c) in chars.iter().enumerate() {
        if c.is_whitespace() {
            flush(&mut tokens, &mut current);
        } else if is_punctuation_char(c) {
            let intra_word_hyphen = c == '-'
                && current.chars().last().is_some_and(char::is_alphanumeric)
                && chars.get(i + 1).is_some_and(|n| n.is_alphanumeric());
            if intra_word_hyphen {
                current.push(c);
            } else {
                flush(&mut tokens, &mut current);
                tokens.push(c.to_string());
            }
        } else {
            current.push(c);
        }
    }
    flush(&mut tokens, &mut current);
    TokenSequence { tokens }
}

fn flush(tokens: &mut Vec<String>, current: &mut String) {
    if !current.is_empty() {
        tokens.push(std::mem::take(current));
    }
}

/// Multiset of contiguous n-token windows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NGramMultiset {
    n: usize,
    counts: HashMap<Vec<String>, usize>,
    total: usize,
}

impl NGramMultiset {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Total number of windows, counting multiplicity.
    pub fn total(&self) -> usize {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    pub fn count(&self, key: &[String]) -> usize {
        self.counts.get(key).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<String>, usize)> {
        self.counts.iter().map(|(k, &v)| (k, v))
    }

    /// Multiset intersection size: sum over keys of min(count here, count there).
    pub fn intersection_count(&self, other: &NGramMultiset) -> usize {
        self.counts
            .iter()
            .map(|(key, &count)| count.min(other.count(key)))
            .sum()
    }
}

/// All contiguous `n`-token windows of `seq` with multiplicities; empty when
/// the sequence is shorter than `n`.
pub fn ngrams(seq: &TokenSequence, n: usize) -> Result<NGramMultiset> {
    if n == 0 {
        return Err(Error::Parameter("n-gram order must be at least 1".into()));
    }
    let mut counts: HashMap<Vec<String>, usize> = HashMap::new();
    let mut total = 0;
    let tokens = seq.tokens();
    if tokens.len() >= n {
        for window in tokens.windows(n) {
            *counts.entry(window.to_vec()).or_insert(0) += 1;
            total += 1;
        }
    }
    Ok(NGramMultiset { n, counts, total })
}

/// Length of the longest common subsequence of two token sequences,
/// by dynamic programming over a two-row table.
pub fn lcs_length(a: &TokenSequence, b: &TokenSequence) -> usize {
    let (a, b) = (a.tokens(), b.tokens());
    if a.is_empty() || b.is_empty() {
        return 0;
    }
    let mut prev = vec![0usize; b.len() + 1];
    let mut cur = vec![0usize; b.len() + 1];
    for ai in a {
        for (j, bj) in b.iter().enumerate() {
            cur[j + 1] = if ai == bj {
                prev[j] + 1
            } else {
                prev[j + 1].max(cur[j])
            };
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}
