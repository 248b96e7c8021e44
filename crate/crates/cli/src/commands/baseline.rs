use std::path::PathBuf;

use clap::Args;

use gi_vqa_core::baseline::{fit_majority_baseline, run_baseline};
use gi_vqa_core::corpus::Split;

use crate::error::CliResult;
use crate::manifest::RunManifest;

use super::{load_corpus_auto, read_split_manifest};

#[derive(Debug, Args)]
pub struct BaselineArgs {
    /// Corpus file (csv or jsonl by extension)
    #[arg(long, value_name = "PATH")]
    pub corpus: PathBuf,

    /// Split manifests directory; without it the whole corpus is used for
    /// both fitting and prediction
    #[arg(long, value_name = "DIR")]
    pub split_dir: Option<PathBuf>,

    /// Split to fit the majority answers on
    #[arg(long, value_enum, default_value = "train")]
    pub fit_split: SplitNameArg,

    /// Split to predict
    #[arg(long, value_enum, default_value = "validation")]
    pub predict_split: SplitNameArg,

    /// Predictions JSONL output path
    #[arg(long, value_name = "PATH")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
pub enum SplitNameArg {
    Train,
    Validation,
    Test,
}

impl From<SplitNameArg> for Split {
    fn from(s: SplitNameArg) -> Split {
        match s {
            SplitNameArg::Train => Split::Train,
            SplitNameArg::Validation => Split::Validation,
            SplitNameArg::Test => Split::Test,
        }
    }
}

pub fn run(args: &BaselineArgs) -> CliResult<()> {
    let corpus = load_corpus_auto(&args.corpus)?;

    let (fit_corpus, predict_corpus) = match &args.split_dir {
        Some(dir) => {
            let rows_of = |split: Split| -> CliResult<Vec<usize>> {
                Ok(read_split_manifest(dir, split, &corpus)?
                    .members
                    .iter()
                    .map(|m| m.row_index)
                    .collect())
            };
            let fit_rows = rows_of(args.fit_split.into())?;
            let predict_rows = rows_of(args.predict_split.into())?;
            (
                corpus
                    .select(&fit_rows)
                    .map_err(crate::error::CliError::from)?,
                corpus
                    .select(&predict_rows)
                    .map_err(crate::error::CliError::from)?,
            )
        }
        None => (corpus.clone(), corpus.clone()),
    };

    let predictor = fit_majority_baseline(&fit_corpus)?;
    let written = run_baseline(&predictor, &predict_corpus, &args.out)?;
    println!(
        "fitted on {} rows, wrote {written} predictions to {}",
        fit_corpus.len(),
        args.out.display()
    );

    let mut manifest = RunManifest::new("baseline")
        .parameter("corpus", args.corpus.display())
        .parameter("fit_split", format!("{:?}", args.fit_split).to_lowercase())
        .parameter(
            "predict_split",
            format!("{:?}", args.predict_split).to_lowercase(),
        )
        .parameter("out", args.out.display())
        .input(&args.corpus)?;
    if let Some(dir) = &args.split_dir {
        manifest = manifest.parameter("split_dir", dir.display());
    }
    manifest.write(&PathBuf::from(format!(
        "{}.manifest.json",
        args.out.display()
    )))?;
    Ok(())
}
