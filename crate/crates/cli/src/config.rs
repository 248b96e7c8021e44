//! The run configuration file: plain `key = value` lines, `#` comments.
//!
//! Metric keys: `bleu_max_n`, `bleu_smoothing` (none|add_epsilon),
//! `rouge_use_stemmer`, `meteor_alpha`, `meteor_beta`, `meteor_gamma`,
//! `meteor_stages` (comma list of exact|stem).
//!
//! Augmentation overrides: `augment.<strategy>.<field>` where strategy is
//! standard|heavy|fine_tuned and field is crop_min_area, hflip_prob, jitter,
//! and (heavy only) vflip_prob, rotate_max_degrees.
//!
//! Unknown keys are rejected. The file is looked up from `--config`, then
//! the `GI_VQA_CONFIG` environment variable; with neither, defaults apply.

use std::collections::BTreeMap;
use std::path::Path;

use gi_vqa_core::augment::{AugmentationStrategy, StrategyKind, StrategyParams};
use gi_vqa_core::metrics::{BleuSmoothing, MeteorStage, MetricConfig};

use crate::error::{CliError, CliResult};

pub const CONFIG_ENV_VAR: &str = "GI_VQA_CONFIG";

#[derive(Debug, Clone, Default)]
pub struct RunConfig {
    pub metrics: MetricConfig,
    augment_overrides: BTreeMap<(StrategyKind, String), f64>,
}

impl RunConfig {
    /// Strategy of the given kind with any configured overrides applied.
    pub fn strategy(&self, kind: StrategyKind) -> CliResult<AugmentationStrategy> {
        let defaults = AugmentationStrategy::of_kind(kind);
        let mut params: StrategyParams = *defaults.params();
        for ((k, field), &value) in &self.augment_overrides {
            if *k != kind {
                continue;
            }
            match field.as_str() {
                "crop_min_area" => params.crop_min_area = value,
                "hflip_prob" => params.hflip_prob = value,
                "vflip_prob" => params.vflip_prob = value,
                "jitter" => params.jitter = value,
                "rotate_max_degrees" => params.rotate_max_degrees = value,
                _ => unreachable!("field validated at parse time"),
            }
        }
        AugmentationStrategy::with_params(kind, params).map_err(CliError::from)
    }
}

/// Resolve the effective configuration from an explicit path or the
/// environment.
pub fn resolve(explicit: Option<&Path>) -> CliResult<RunConfig> {
    if let Some(path) = explicit {
        return load(path);
    }
    if let Ok(env_path) = std::env::var(CONFIG_ENV_VAR) {
        if !env_path.trim().is_empty() {
            return load(Path::new(&env_path));
        }
    }
    Ok(RunConfig::default())
}

pub fn load(path: &Path) -> CliResult<RunConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("cannot read config {}: {e}", path.display())))?;
    parse(&text).map_err(|msg| CliError::input(format!("config {}: {msg}", path.display())))
}

fn parse(text: &str) -> Result<RunConfig, String> {
    let mut config = RunConfig::default();
    for (line_no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("line {}: expected key = value", line_no + 1))?;
        let (key, value) = (key.trim(), value.trim());
        apply(&mut config, key, value).map_err(|msg| format!("line {}: {msg}", line_no + 1))?;
    }
    config.metrics.validate().map_err(|e| e.to_string())?;
    Ok(config)
}

fn apply(config: &mut RunConfig, key: &str, value: &str) -> Result<(), String> {
    fn float(value: &str) -> Result<f64, String> {
        value
            .parse::<f64>()
            .map_err(|_| format!("expected a number, got {value:?}"))
    }
    fn boolean(value: &str) -> Result<bool, String> {
        match value {
            "true" => Ok(true),
            "false" => Ok(false),
            _ => Err(format!("expected true or false, got {value:?}")),
        }
    }

    match key {
        "bleu_max_n" => {
            config.metrics.bleu_max_n = value
                .parse::<usize>()
                .map_err(|_| format!("expected a positive integer, got {value:?}"))?;
        }
        "bleu_smoothing" => {
            config.metrics.bleu_smoothing = match value {
                "none" => BleuSmoothing::None,
                "add_epsilon" => BleuSmoothing::AddEpsilon,
                _ => return Err(format!("expected none or add_epsilon, got {value:?}")),
            };
        }
        "rouge_use_stemmer" => config.metrics.rouge_use_stemmer = boolean(value)?,
        "meteor_alpha" => config.metrics.meteor_alpha = float(value)?,
        "meteor_beta" => config.metrics.meteor_beta = float(value)?,
        "meteor_gamma" => config.metrics.meteor_gamma = float(value)?,
        "meteor_stages" => {
            let mut stages = Vec::new();
            for stage in value.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                stages.push(match stage {
                    "exact" => MeteorStage::Exact,
                    "stem" => MeteorStage::Stem,
                    _ => return Err(format!("unknown meteor stage {stage:?}")),
                });
            }
            config.metrics.meteor_stages = stages;
        }
        _ => {
            let Some(rest) = key.strip_prefix("augment.") else {
                return Err(format!("unknown key {key:?}"));
            };
            let (strategy, field) = rest
                .split_once('.')
                .ok_or_else(|| format!("expected augment.<strategy>.<field>, got {key:?}"))?;
            let kind = match strategy {
                "standard" => StrategyKind::Standard,
                "heavy" => StrategyKind::Heavy,
                "fine_tuned" => StrategyKind::FineTuned,
                _ => return Err(format!("unknown augment strategy {strategy:?}")),
            };
            if !matches!(
                field,
                "crop_min_area" | "hflip_prob" | "vflip_prob" | "jitter" | "rotate_max_degrees"
            ) {
                return Err(format!("unknown augment field {field:?}"));
            }
            config
                .augment_overrides
                .insert((kind, field.to_string()), float(value)?);
        }
    }
    Ok(())
}
