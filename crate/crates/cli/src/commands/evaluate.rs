use std::collections::HashMap;
use std::path::PathBuf;

use clap::Args;
use serde::Serialize;

use gi_vqa_core::corpus::Split;
use gi_vqa_core::eda::stratified_metric_report;
use gi_vqa_core::fsio::write_atomic;
use gi_vqa_core::metrics::{evaluate_corpus, MetricReport};
use gi_vqa_core::predictions::read_predictions;

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::manifest::RunManifest;
use crate::table::{render_table, TableFormat};

use super::{load_corpus_auto, read_split_manifest};

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    /// Predictions JSONL ({image_id, question, prediction} per line)
    #[arg(long, value_name = "PATH")]
    pub predictions: PathBuf,

    /// Corpus with the gold answers
    #[arg(long, value_name = "PATH")]
    pub corpus: PathBuf,

    /// Restrict gold pairs to one split (needs --split-dir)
    #[arg(long, value_enum)]
    pub split: Option<EvalSplitArg>,

    /// Directory holding the split manifests written by `split`
    #[arg(long, value_name = "DIR")]
    pub split_dir: Option<PathBuf>,

    /// Additionally report metrics per first-word question type
    #[arg(long)]
    pub by_question_type: bool,

    /// Table format for stdout
    #[arg(long, value_enum, default_value = "text")]
    pub format: TableFormat,

    /// Directory for report.json and the run manifest
    #[arg(long, value_name = "DIR", default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
pub enum EvalSplitArg {
    Validation,
    Test,
}

impl From<EvalSplitArg> for Split {
    fn from(s: EvalSplitArg) -> Split {
        match s {
            EvalSplitArg::Validation => Split::Validation,
            EvalSplitArg::Test => Split::Test,
        }
    }
}

#[derive(Debug, Serialize)]
struct EvaluationReport {
    overall: MetricReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    by_question_type: Option<Vec<TypedRow>>,
    gold_rows: usize,
    evaluated_pairs: usize,
}

#[derive(Debug, Serialize)]
struct TypedRow {
    question_type: String,
    report: MetricReport,
}

pub fn run(args: &EvaluateArgs, config: &RunConfig) -> CliResult<()> {
    let corpus = load_corpus_auto(&args.corpus)?;

    let gold_rows: Vec<usize> = match (args.split, &args.split_dir) {
        (Some(split), Some(dir)) => read_split_manifest(dir, split.into(), &corpus)?
            .members
            .iter()
            .map(|m| m.row_index)
            .collect(),
        (Some(_), None) => {
            return Err(CliError::input("--split requires --split-dir"));
        }
        (None, _) => (0..corpus.len()).collect(),
    };

    // gold lookup by (image_id, question)
    let mut gold: HashMap<(&str, &str), Vec<usize>> = HashMap::new();
    for &row in &gold_rows {
        let t = &corpus.triplets()[row];
        gold.entry((t.image_id.as_str(), t.question.as_str()))
            .or_default()
            .push(row);
    }

    let predictions = read_predictions(&args.predictions)?;
    let mut used: HashMap<(&str, &str), bool> = HashMap::new();
    let mut orphans = Vec::new();
    let mut ambiguous = Vec::new();
    let mut duplicates = Vec::new();
    let mut pairs: Vec<(String, String, String)> = Vec::new(); // question, candidate, reference

    for p in &predictions {
        let key = (p.image_id.as_str(), p.question.as_str());
        match gold.get(&key) {
            None => orphans.push(key),
            Some(rows) if rows.len() > 1 => ambiguous.push(key),
            Some(rows) => {
                if used.insert(key, true).is_some() {
                    duplicates.push(key);
                } else {
                    let t = &corpus.triplets()[rows[0]];
                    pairs.push((t.question.clone(), p.prediction.clone(), t.answer.clone()));
                }
            }
        }
    }

    if !(orphans.is_empty() && ambiguous.is_empty() && duplicates.is_empty()) {
        let mut parts = Vec::new();
        for (name, list) in [
            ("unmatched", &orphans),
            ("ambiguous", &ambiguous),
            ("duplicate", &duplicates),
        ] {
            if !list.is_empty() {
                let shown: Vec<String> = list
                    .iter()
                    .take(5)
                    .map(|(i, q)| format!("({i}, {q:?})"))
                    .collect();
                parts.push(format!(
                    "{} {name} predictions: {}",
                    list.len(),
                    shown.join(", ")
                ));
            }
        }
        return Err(CliError::join(parts.join("; ")));
    }
    if pairs.is_empty() {
        return Err(CliError::join("no prediction joined a gold pair"));
    }

    let flat: Vec<(&str, &str)> = pairs
        .iter()
        .map(|(_, c, r)| (c.as_str(), r.as_str()))
        .collect();
    let overall = evaluate_corpus(&flat, &config.metrics)?;
    print!(
        "{}",
        render_table("set", &[("all".to_string(), overall.clone())], args.format)
    );

    let by_type = if args.by_question_type {
        let rows = stratified_metric_report(&pairs, &config.metrics)?;
        let labeled: Vec<(String, MetricReport)> = rows
            .iter()
            .map(|(key, report)| (key.to_string(), report.clone()))
            .collect();
        println!();
        print!("{}", render_table("question_type", &labeled, args.format));
        Some(
            rows.into_iter()
                .map(|(key, report)| TypedRow {
                    question_type: key.to_string(),
                    report,
                })
                .collect(),
        )
    } else {
        None
    };

    if pairs.len() < gold_rows.len() {
        eprintln!(
            "note: {} of {} gold rows had no prediction",
            gold_rows.len() - pairs.len(),
            gold_rows.len()
        );
    }

    let report = EvaluationReport {
        overall,
        by_question_type: by_type,
        gold_rows: gold_rows.len(),
        evaluated_pairs: pairs.len(),
    };
    let mut json = serde_json::to_string_pretty(&report)?;
    json.push('\n');
    write_atomic(&args.out.join("report.json"), json.as_bytes())?;

    let mut manifest = RunManifest::new("evaluate")
        .parameter("predictions", args.predictions.display())
        .parameter("corpus", args.corpus.display())
        .parameter("by_question_type", args.by_question_type)
        .parameter("out", args.out.display())
        .input(&args.predictions)?
        .input(&args.corpus)?;
    if let Some(split) = args.split {
        manifest = manifest.parameter("split", format!("{:?}", split).to_lowercase());
    }
    manifest.write(&args.out.join("run_manifest.json"))?;
    Ok(())
}
