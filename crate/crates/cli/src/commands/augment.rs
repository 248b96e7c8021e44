use std::path::{Path, PathBuf};

use clap::Args;

use gi_vqa_core::augment::{apply_strategy, StrategyKind};
use gi_vqa_core::fsio::write_atomic;

use crate::config::RunConfig;
use crate::error::CliResult;
use crate::imageio::{load_image, save_image};
use crate::manifest::RunManifest;

#[derive(Debug, Args)]
pub struct AugmentArgs {
    /// Input image (png or ppm)
    #[arg(long, value_name = "PATH")]
    pub image: PathBuf,

    /// Augmentation strategy
    #[arg(long, value_enum)]
    pub strategy: StrategyArg,

    /// Data seed; the per-image stream also depends on the file stem
    #[arg(long, default_value_t = 42)]
    pub seed: u64,

    /// Output image path (png or ppm); the transform record lands in
    /// `<out>.transforms.json`
    #[arg(long, value_name = "PATH")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
pub enum StrategyArg {
    None,
    Standard,
    Heavy,
    FineTuned,
}

impl From<StrategyArg> for StrategyKind {
    fn from(s: StrategyArg) -> StrategyKind {
        match s {
            StrategyArg::None => StrategyKind::None,
            StrategyArg::Standard => StrategyKind::Standard,
            StrategyArg::Heavy => StrategyKind::Heavy,
            StrategyArg::FineTuned => StrategyKind::FineTuned,
        }
    }
}

fn image_id_of(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

pub fn run(args: &AugmentArgs, config: &RunConfig) -> CliResult<()> {
    let img = load_image(&args.image)?;
    let strategy = config.strategy(args.strategy.into())?;
    let image_id = image_id_of(&args.image);

    let (augmented, record) = apply_strategy(&img, &strategy, args.seed, &image_id)?;
    save_image(&args.out, &augmented)?;

    let sidecar = PathBuf::from(format!("{}.transforms.json", args.out.display()));
    let mut json = serde_json::to_string_pretty(&record)?;
    json.push('\n');
    write_atomic(&sidecar, json.as_bytes())?;

    println!(
        "{} -> {} ({} ops, {}x{})",
        args.image.display(),
        args.out.display(),
        record.len(),
        augmented.width(),
        augmented.height()
    );

    RunManifest::new("augment-preview")
        .parameter("image", args.image.display())
        .parameter("image_id", image_id)
        .parameter("strategy", strategy.kind())
        .parameter("out", args.out.display())
        .seed("data", args.seed)
        .input(&args.image)?
        .write(&PathBuf::from(format!(
            "{}.manifest.json",
            args.out.display()
        )))?;
    Ok(())
}
