//! Core library for benchmarking generative visual question answering on
//! gastrointestinal endoscopy corpora.
//!
//! The crate covers the non-model half of a VQA benchmark: corpus ingestion
//! and seeded stratified splitting ([`corpus`]), shared text normalization
//! ([`textnorm`]), BLEU / ROUGE / METEOR scoring ([`metrics`]), corpus
//! profiling ([`eda`]), deterministic image augmentation ([`augment`]), and
//! model-free baseline predictors ([`baseline`]).
//!
//! Everything is deterministic: randomized operations take explicit seeds and
//! draw from the SplitMix64 streams in [`rng`].

pub mod augment;
pub mod baseline;
pub mod corpus;
pub mod eda;
pub mod error;
pub mod fsio;
pub mod metrics;
pub mod predictions;
pub mod rng;
pub mod textnorm;

pub use error::{Error, Result};
