use std::path::PathBuf;

use clap::Args;

use gi_vqa_core::corpus::{dataset_stats, load_corpus, CorpusFormat};
use gi_vqa_core::fsio::write_atomic;

use crate::error::CliResult;
use crate::manifest::RunManifest;

#[derive(Debug, Args)]
pub struct IngestArgs {
    /// Corpus file to validate
    #[arg(long, value_name = "PATH")]
    pub input: PathBuf,

    /// Input format
    #[arg(long, value_enum)]
    pub format: FormatArg,

    /// Where to write the canonical JSONL corpus
    #[arg(long, value_name = "PATH")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
pub enum FormatArg {
    Csv,
    Jsonl,
}

impl From<FormatArg> for CorpusFormat {
    fn from(f: FormatArg) -> CorpusFormat {
        match f {
            FormatArg::Csv => CorpusFormat::Csv,
            FormatArg::Jsonl => CorpusFormat::Jsonl,
        }
    }
}

pub fn run(args: &IngestArgs) -> CliResult<()> {
    let corpus = load_corpus(&args.input, args.format.into())?;
    let stats = dataset_stats(&corpus);

    write_atomic(&args.out, corpus.to_jsonl().as_bytes())?;

    println!("triplets:           {}", stats.n_triplets);
    println!("unique images:      {}", stats.n_unique_images);
    println!("question templates: {}", stats.n_question_templates);
    println!("unique answers:     {}", stats.n_unique_answers);
    println!("wrote {}", args.out.display());

    RunManifest::new("ingest")
        .parameter("input", args.input.display())
        .parameter("format", format!("{:?}", args.format).to_lowercase())
        .parameter("out", args.out.display())
        .input(&args.input)?
        .write(&manifest_path(&args.out))?;
    Ok(())
}

fn manifest_path(out: &std::path::Path) -> PathBuf {
    PathBuf::from(format!("{}.manifest.json", out.display()))
}
