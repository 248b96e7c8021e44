use std::path::PathBuf;

use clap::Args;

use gi_vqa_core::corpus::{split_corpus, Split, SplitProtocol, StrataKey};
use gi_vqa_core::fsio::write_atomic;

use crate::error::CliResult;
use crate::manifest::RunManifest;

use super::{load_corpus_auto, split_manifest_path};

#[derive(Debug, Args)]
pub struct SplitArgs {
    /// Corpus file (csv or jsonl by extension)
    #[arg(long, value_name = "PATH")]
    pub corpus: PathBuf,

    /// Stratified subset fraction applied before splitting
    #[arg(long, default_value_t = 1.0)]
    pub fraction: f64,

    /// Stratification key
    #[arg(long, value_enum, default_value = "template")]
    pub strata: StrataArg,

    /// Data seed
    #[arg(long, default_value_t = 42)]
    pub seed: u64,

    /// Stage-1 train share of the subset
    #[arg(long, default_value_t = 0.9)]
    pub stage1_train: f64,

    /// Stage-2 test share of the held-out part
    #[arg(long, default_value_t = 0.9)]
    pub stage2_train: f64,

    /// Directory for the three split manifests and the run manifest
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
pub enum StrataArg {
    Source,
    Template,
}

impl From<StrataArg> for StrataKey {
    fn from(s: StrataArg) -> StrataKey {
        match s {
            StrataArg::Source => StrataKey::SourceLabel,
            StrataArg::Template => StrataKey::QuestionTemplate,
        }
    }
}

pub fn run(args: &SplitArgs) -> CliResult<()> {
    let corpus = load_corpus_auto(&args.corpus)?;
    let protocol = SplitProtocol {
        subset_fraction: args.fraction,
        strata_key: args.strata.into(),
        stage1_train_fraction: args.stage1_train,
        stage2_train_fraction: args.stage2_train,
        seed: args.seed,
    };
    let assignment = split_corpus(&corpus, &protocol)?;

    for split in Split::ALL {
        let manifest = assignment.manifest(&corpus, split);
        let mut json = serde_json::to_string_pretty(&manifest)?;
        json.push('\n');
        write_atomic(&split_manifest_path(&args.out, split), json.as_bytes())?;
        println!("{split}: {} members", manifest.members.len());
    }
    println!("checksum: {}", assignment.checksum());

    RunManifest::new("split")
        .parameter("corpus", args.corpus.display())
        .parameter("fraction", args.fraction)
        .parameter("strata", protocol.strata_key)
        .parameter("stage1_train", args.stage1_train)
        .parameter("stage2_train", args.stage2_train)
        .parameter("out", args.out.display())
        .parameter("checksum", assignment.checksum())
        .seed("data", args.seed)
        .input(&args.corpus)?
        .write(&args.out.join("run_manifest.json"))?;
    Ok(())
}
