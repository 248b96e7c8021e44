use thiserror::Error;

/// Errors produced by corpus handling, metric computation, and augmentation.
#[derive(Debug, Error)]
pub enum Error {
    /// A record is missing a field or carries an empty one.
    #[error("schema error at record {record}: {message}")]
    Schema { record: usize, message: String },

    /// Input bytes are not valid UTF-8.
    #[error("encoding error at record {record}: input is not valid UTF-8")]
    Encoding { record: usize },

    /// The input file contains no records.
    #[error("empty corpus: {0}")]
    EmptyCorpus(String),

    /// A parameter is outside its documented range.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// The corpus is too small to produce a three-way split.
    #[error("degenerate split: {members} members (need at least 3)")]
    DegenerateSplit { members: usize },

    /// A question has no non-punctuation token to classify by.
    #[error("cannot classify question {0:?}: no non-punctuation token")]
    Classification(String),

    /// A baseline could not be fitted.
    #[error("fit error: {0}")]
    Fit(String),

    /// Candidate and reference lists do not pair up.
    #[error("pairing error: {candidates} candidates vs {references} references")]
    Pairing {
        candidates: usize,
        references: usize,
    },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
