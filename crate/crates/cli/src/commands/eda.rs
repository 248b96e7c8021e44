use std::path::PathBuf;

use clap::Args;
use serde::Serialize;

use gi_vqa_core::corpus::{dataset_stats, DatasetStats};
use gi_vqa_core::eda::{answer_frequency, answer_length_histogram, LengthHistogram};
use gi_vqa_core::fsio::write_atomic;

use crate::error::CliResult;
use crate::manifest::RunManifest;

use super::load_corpus_auto;

#[derive(Debug, Args)]
pub struct EdaArgs {
    /// Corpus file (csv or jsonl by extension)
    #[arg(long, value_name = "PATH")]
    pub corpus: PathBuf,

    /// Number of top answers to export
    #[arg(long, default_value_t = 10)]
    pub top_k: usize,

    /// Directory for frequencies.csv, histogram.csv, summary.json
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,
}

#[derive(Debug, Serialize)]
struct EdaSummary {
    stats: DatasetStats,
    top_answers: Vec<(String, u64)>,
    answer_length_histogram: LengthHistogram,
}

pub fn run(args: &EdaArgs) -> CliResult<()> {
    let corpus = load_corpus_auto(&args.corpus)?;
    let stats = dataset_stats(&corpus);
    let frequency = answer_frequency(&corpus, args.top_k)?;
    let histogram = answer_length_histogram(&corpus);

    let mut freq_csv = csv::Writer::from_writer(Vec::new());
    freq_csv
        .write_record(["answer", "count"])
        .expect("in-memory write");
    for (answer, count) in &frequency.entries {
        freq_csv
            .write_record([answer.as_str(), &count.to_string()])
            .expect("in-memory write");
    }
    let freq_bytes = freq_csv.into_inner().expect("flushed");
    write_atomic(&args.out.join("frequencies.csv"), &freq_bytes)?;

    let mut hist_csv = String::from("length,count\n");
    for (length, count) in &histogram.counts {
        hist_csv.push_str(&format!("{length},{count}\n"));
    }
    write_atomic(&args.out.join("histogram.csv"), hist_csv.as_bytes())?;

    let summary = EdaSummary {
        stats,
        top_answers: frequency.entries.clone(),
        answer_length_histogram: histogram,
    };
    let mut json = serde_json::to_string_pretty(&summary)?;
    json.push('\n');
    write_atomic(&args.out.join("summary.json"), json.as_bytes())?;

    println!("triplets:           {}", stats.n_triplets);
    println!("question templates: {}", stats.n_question_templates);
    println!("unique answers:     {}", stats.n_unique_answers);
    for (answer, count) in frequency.entries.iter().take(args.top_k) {
        println!("  {count:>8}  {answer}");
    }

    RunManifest::new("eda")
        .parameter("corpus", args.corpus.display())
        .parameter("top_k", args.top_k)
        .parameter("out", args.out.display())
        .input(&args.corpus)?
        .write(&args.out.join("run_manifest.json"))?;
    Ok(())
}
