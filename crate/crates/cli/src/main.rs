//! Command-line benchmark harness for generative VQA on GI-endoscopy
//! corpora: ingestion, stratified splits, baseline predictions, metric
//! reports, corpus statistics, and augmentation previews.

mod commands;
mod config;
mod error;
mod imageio;
mod manifest;
mod table;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "gi-vqa",
    version,
    about = "Benchmark harness for generative GI-endoscopy VQA"
)]
struct Cli {
    /// Config file with metric and augmentation settings
    /// (falls back to $GI_VQA_CONFIG, then built-in defaults)
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a corpus file, print its stats, write canonical JSONL
    Ingest(commands::ingest::IngestArgs),
    /// Subset and split a corpus into train/validation/test manifests
    Split(commands::split::SplitArgs),
    /// Score a predictions file against gold answers
    Evaluate(commands::evaluate::EvaluateArgs),
    /// Export answer frequencies, length histogram, and summary stats
    Eda(commands::eda::EdaArgs),
    /// Apply an augmentation strategy to one image, with an audit sidecar
    AugmentPreview(commands::augment::AugmentArgs),
    /// Fit the majority baseline on one split and predict another
    Baseline(commands::baseline::BaselineArgs),
}

fn main() {
    let cli = Cli::parse();
    let result = (|| {
        let run_config = config::resolve(cli.config.as_deref())?;
        match &cli.command {
            Command::Ingest(args) => commands::ingest::run(args),
            Command::Split(args) => commands::split::run(args),
            Command::Evaluate(args) => commands::evaluate::run(args, &run_config),
            Command::Eda(args) => commands::eda::run(args),
            Command::AugmentPreview(args) => commands::augment::run(args, &run_config),
            Command::Baseline(args) => commands::baseline::run(args),
        }
    })();

    if let Err(e) = result {
        eprintln!("error: {e}");
        std::process::exit(e.code);
    }
}
