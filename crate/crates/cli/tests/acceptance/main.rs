//! Acceptance suite. Each test covers one release criterion end to end and
//! prints a `[PASS]` line; run with `cargo test --test acceptance`.

mod oracle;

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use serde::Deserialize;

use gi_vqa_core::augment::{
    apply_strategy, color_jitter, horizontal_flip, replay, rotate, vertical_flip,
    AugmentationStrategy, RgbImage, StrategyKind,
};
use gi_vqa_core::corpus::{split_corpus, Corpus, IqaTriplet, Split, SplitProtocol};
use gi_vqa_core::eda::{answer_frequency, answer_length_histogram};
use gi_vqa_core::metrics::{
    bleu_corpus, evaluate_corpus, meteor_alignment, meteor_pair, rouge_l_pair, rouge_n_pair,
    score_pair, MetricConfig,
};
use gi_vqa_core::rng::SeededStream;
use gi_vqa_core::textnorm::TokenSequence;

const TOLERANCE: f64 = 1e-4;
const MICRO_TOLERANCE: f64 = 1e-9;

fn fixture_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

#[derive(Deserialize)]
struct ReferenceFixture {
    corpus: ExpectedReport,
    pairs: Vec<ExpectedPair>,
}

#[derive(Deserialize)]
struct ExpectedReport {
    bleu: f64,
    rouge1: f64,
    rouge2: f64,
    #[serde(rename = "rougeL")]
    rouge_l: f64,
    meteor: f64,
    n_pairs: usize,
}

#[derive(Deserialize)]
struct ExpectedPair {
    candidate: String,
    reference: String,
    rouge1_f: f64,
    rouge2_f: f64,
    #[serde(rename = "rougeL_f")]
    rouge_l_f: f64,
    meteor: f64,
}

#[test]
fn c1_metric_oracle_parity() {
    let started = Instant::now();
    let fixture: ReferenceFixture = serde_json::from_str(
        &std::fs::read_to_string(fixture_path("metrics_reference.json")).unwrap(),
    )
    .unwrap();
    assert!(
        fixture.pairs.len() >= 50,
        "fixture must hold at least 50 pairs"
    );
    let config = MetricConfig::default();

    for pair in &fixture.pairs {
        let scored = score_pair(&pair.candidate, &pair.reference, &config).unwrap();
        for (name, got, want) in [
            ("rouge1", scored.rouge1_f, pair.rouge1_f),
            ("rouge2", scored.rouge2_f, pair.rouge2_f),
            ("rougeL", scored.rouge_l_f, pair.rouge_l_f),
            ("meteor", scored.meteor, pair.meteor),
        ] {
            assert!(
                (got - want).abs() <= TOLERANCE,
                "{name} mismatch on {:?}: got {got}, reference {want}",
                pair.candidate
            );
        }
    }

    let pairs: Vec<(&str, &str)> = fixture
        .pairs
        .iter()
        .map(|p| (p.candidate.as_str(), p.reference.as_str()))
        .collect();
    let report = evaluate_corpus(&pairs, &config).unwrap();
    assert_eq!(report.n_pairs, fixture.corpus.n_pairs);
    for (name, got, want) in [
        ("bleu", report.bleu, fixture.corpus.bleu),
        ("rouge1", report.rouge1, fixture.corpus.rouge1),
        ("rouge2", report.rouge2, fixture.corpus.rouge2),
        ("rougeL", report.rouge_l, fixture.corpus.rouge_l),
        ("meteor", report.meteor, fixture.corpus.meteor),
    ] {
        assert!(
            (got - want).abs() <= TOLERANCE,
            "corpus {name}: got {got}, reference {want}"
        );
    }

    // hand-derived micro-fixtures
    let seq = |text: &str| TokenSequence::from_words(&text.split(' ').collect::<Vec<_>>());
    let two_gram = MetricConfig {
        bleu_max_n: 2,
        ..MetricConfig::default()
    };
    let bleu = bleu_corpus(
        &[seq("the polyp is small")],
        &[seq("the polyp is very small")],
        &two_gram,
    )
    .unwrap();
    let expected = (1.0f64 - 5.0 / 4.0).exp() * (2.0f64 / 3.0).sqrt();
    assert!((bleu - expected).abs() <= MICRO_TOLERANCE);
    assert!((bleu - 0.6359).abs() <= TOLERANCE);

    let rouge_l = rouge_l_pair(
        &seq("polyp in colon"),
        &seq("a polyp in the colon"),
        &config,
    );
    assert!((rouge_l.f1 - 0.75).abs() <= MICRO_TOLERANCE);

    let meteor_one = meteor_pair(&seq("yes"), &seq("yes"), &config);
    assert!((meteor_one - 0.5).abs() <= MICRO_TOLERANCE);
    let ten = seq("the small polyp sits in the upper part of colon");
    let meteor_ten = meteor_pair(&ten, &ten, &config);
    assert!((meteor_ten - 0.9995).abs() <= MICRO_TOLERANCE);

    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}, budget 1s");
    println!(
        "[PASS] c1 metric oracle parity: {} fixture pairs within {TOLERANCE}, micro-fixtures within {MICRO_TOLERANCE} ({elapsed:?})",
        fixture.pairs.len()
    );
}

#[test]
fn c2_brute_force_equivalence() {
    let started = Instant::now();
    let vocabulary = ["polyp", "polyps", "colon"];
    let mut sequences: Vec<Vec<&str>> = vec![Vec::new()];
    let mut frontier: Vec<Vec<&str>> = vec![Vec::new()];
    for _ in 0..4 {
        let mut next = Vec::new();
        for prefix in &frontier {
            for word in vocabulary {
                let mut extended = prefix.clone();
                extended.push(word);
                next.push(extended);
            }
        }
        sequences.extend(next.iter().cloned());
        frontier = next;
    }
    assert_eq!(sequences.len(), 121);

    let config = MetricConfig::default();
    let mut checked = 0u64;
    for cand in &sequences {
        let cand_seq = TokenSequence::from_words(cand);
        for reference in &sequences {
            let ref_seq = TokenSequence::from_words(reference);

            for n in [1, 2] {
                let got = rouge_n_pair(&cand_seq, &ref_seq, n, &config).unwrap();
                let (p, r, f1) = oracle::naive_rouge_n(cand, reference, n);
                assert_eq!((got.precision, got.recall, got.f1), (p, r, f1));
            }

            let got = rouge_l_pair(&cand_seq, &ref_seq, &config);
            let (p, r, f1) = oracle::naive_rouge_l(cand, reference);
            assert_eq!((got.precision, got.recall, got.f1), (p, r, f1));

            let alignment = meteor_alignment(&cand_seq, &ref_seq, &config.meteor_stages);
            let (matches, chunks) = oracle::exhaustive_meteor_alignment(cand, reference);
            assert_eq!(
                (alignment.matches, alignment.chunks),
                (matches, chunks),
                "alignment mismatch on {cand:?} vs {reference:?}"
            );
            let got = meteor_pair(&cand_seq, &ref_seq, &config);
            let want = oracle::naive_meteor_score(
                cand,
                reference,
                config.meteor_alpha,
                config.meteor_beta,
                config.meteor_gamma,
            );
            assert_eq!(got, want, "meteor mismatch on {cand:?} vs {reference:?}");

            if !cand.is_empty() {
                let got = bleu_corpus(
                    std::slice::from_ref(&cand_seq),
                    std::slice::from_ref(&ref_seq),
                    &config,
                )
                .unwrap();
                let want = oracle::naive_bleu_corpus(&[(cand.clone(), reference.clone())], 4);
                assert_eq!(got, want, "bleu mismatch on {cand:?} vs {reference:?}");
            }
            checked += 1;
        }
    }

    let elapsed = started.elapsed();
    assert!(elapsed.as_secs() < 60, "took {elapsed:?}, budget 60s");
    println!(
        "[PASS] c2 brute-force equivalence: {checked} pairs over a 3-token vocabulary, exact match ({elapsed:?})"
    );
}

#[test]
fn c3_single_word_bleu_degeneracy() {
    let words = ["yes", "no", "none", "0", "polyp", "ulcer"];
    let mut stream = SeededStream::new(42);
    let pairs: Vec<(String, String)> = (0..200)
        .map(|_| {
            (
                words[stream.next_below(words.len() as u64) as usize].to_string(),
                words[stream.next_below(words.len() as u64) as usize].to_string(),
            )
        })
        .collect();
    let report = evaluate_corpus(&pairs, &MetricConfig::default()).unwrap();
    assert_eq!(
        report.bleu, 0.0,
        "single-word corpus BLEU must be exactly 0"
    );

    let identical: Vec<(String, String)> = words
        .iter()
        .map(|w| (w.to_string(), w.to_string()))
        .collect();
    let report = evaluate_corpus(&identical, &MetricConfig::default()).unwrap();
    assert_eq!(report.bleu, 0.0);
    assert_eq!(
        report.meteor, 0.5,
        "identical single-word METEOR is exactly 0.5"
    );

    let seq = TokenSequence::from_words(&["polyp"]);
    assert_eq!(meteor_pair(&seq, &seq, &MetricConfig::default()), 0.5);

    println!("[PASS] c3 single-word degeneracy: corpus BLEU = 0 exactly, identical single-word METEOR = 0.5 exactly");
}

fn synthetic_corpus(templates: usize, per_template: usize) -> Corpus {
    let mut triplets = Vec::new();
    for t in 0..templates {
        for i in 0..per_template {
            triplets.push(IqaTriplet {
                image_id: format!("img_{t}_{i}"),
                source_label: format!("category{}", i % 6),
                question: format!("Question template number {t}?"),
                answer: format!("answer {}", i % 17),
            });
        }
    }
    Corpus::from_triplets(triplets).unwrap()
}

#[test]
fn c4_split_determinism_and_proportions() {
    let corpus = synthetic_corpus(20, 500);
    assert_eq!(corpus.len(), 10_000);

    let protocol = SplitProtocol::default();
    let first = split_corpus(&corpus, &protocol).unwrap();
    let second = split_corpus(&corpus, &protocol).unwrap();
    for split in Split::ALL {
        let a = serde_json::to_string(&first.manifest(&corpus, split)).unwrap();
        let b = serde_json::to_string(&second.manifest(&corpus, split)).unwrap();
        assert_eq!(a, b, "manifest for {split} differs between identical runs");
    }

    // round-half-up with the minimum of one, checked per stratum
    let subset =
        gi_vqa_core::corpus::stratified_subset_indices(&corpus, 0.013, protocol.strata_key, 42)
            .unwrap();
    assert_eq!(
        subset.len(),
        20 * 7,
        "round_half_up(0.013 * 500) = 7 per stratum"
    );
    let tiny =
        gi_vqa_core::corpus::stratified_subset_indices(&corpus, 0.0001, protocol.strata_key, 42)
            .unwrap();
    assert_eq!(tiny.len(), 20, "every stratum keeps at least one member");

    let train = first.members(Split::Train).len() as i64;
    let validation = first.members(Split::Validation).len() as i64;
    let test = first.members(Split::Test).len() as i64;
    assert!((train - 9_000).abs() <= 1, "train = {train}");
    assert!((test - 900).abs() <= 1, "test = {test}");
    assert!((validation - 100).abs() <= 1, "validation = {validation}");

    println!(
        "[PASS] c4 split determinism and proportions: identical manifests, quota rule exact, sizes {train}/{test}/{validation}"
    );
}

#[test]
fn c5_augmentation_property_suite() {
    let started = Instant::now();
    let mut stream = SeededStream::new(7);
    let pixels: Vec<u8> = (0..64 * 64 * 3)
        .map(|_| stream.next_below(256) as u8)
        .collect();
    let img = RgbImage::new(64, 64, pixels).unwrap();

    // involution and identity checks, bitwise
    assert_eq!(horizontal_flip(&horizontal_flip(&img)), img);
    assert_eq!(vertical_flip(&vertical_flip(&img)), img);
    assert_eq!(rotate(&img, 0.0, [0, 0, 0]), img);
    let (jittered, _) = color_jitter(&img, 0.0, 0.0, 0.0, &mut SeededStream::new(1)).unwrap();
    assert_eq!(jittered, img);

    let strategies = [
        AugmentationStrategy::none(),
        AugmentationStrategy::standard(),
        AugmentationStrategy::heavy(),
        AugmentationStrategy::fine_tuned(),
    ];
    let mut draws = 0u64;
    for strategy in &strategies {
        for seed in 0..1000u64 {
            let (out, record) = apply_strategy(&img, strategy, seed, "acceptance").unwrap();
            assert_eq!(
                out.pixels().len(),
                out.width() as usize * out.height() as usize * 3
            );
            assert!(out.width() >= 1 && out.height() >= 1);
            if !matches!(strategy.kind(), StrategyKind::Heavy) {
                assert!(!record.changes_orientation());
            }
            assert_eq!(
                replay(&img, &record).unwrap(),
                out,
                "replay must be byte-identical"
            );
            draws += 1;
        }
    }

    let elapsed = started.elapsed();
    assert!(elapsed.as_secs() < 30, "took {elapsed:?}, budget 30s");
    println!(
        "[PASS] c5 augmentation properties: {draws} seeded draws, invariants and byte-exact replay ({elapsed:?})"
    );
}

#[derive(Deserialize)]
struct CliReport {
    overall: CliMetricRow,
    by_question_type: Option<Vec<CliTypedRow>>,
    evaluated_pairs: usize,
}

#[derive(Deserialize)]
struct CliTypedRow {
    question_type: String,
    report: CliMetricRow,
}

#[derive(Deserialize)]
struct CliMetricRow {
    bleu: f64,
    rouge1: f64,
    rouge2: f64,
    #[serde(rename = "rougeL")]
    rouge_l: f64,
    meteor: f64,
    n_pairs: usize,
}

#[derive(Deserialize)]
struct E2eExpected {
    overall: ExpectedReport,
    by_question_type: Vec<E2eExpectedRow>,
}

#[derive(Deserialize)]
struct E2eExpectedRow {
    question_type: String,
    report: ExpectedReport,
}

fn run_cli(dir: &Path, args: &[&str]) {
    let output = Command::new(env!("CARGO_BIN_EXE_gi-vqa"))
        .args(args)
        .current_dir(dir)
        .env_remove("GI_VQA_CONFIG")
        .output()
        .expect("binary runs");
    assert!(
        output.status.success(),
        "gi-vqa {args:?} failed: {}",
        String::from_utf8_lossy(&output.stderr)
    );
}

#[test]
fn c6_end_to_end_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::copy(
        fixture_path("e2e_corpus.csv"),
        dir.path().join("corpus.csv"),
    )
    .unwrap();

    run_cli(
        dir.path(),
        &[
            "ingest",
            "--input",
            "corpus.csv",
            "--format",
            "csv",
            "--out",
            "corpus.jsonl",
        ],
    );
    run_cli(
        dir.path(),
        &[
            "split",
            "--corpus",
            "corpus.jsonl",
            "--seed",
            "42",
            "--out",
            "splits",
        ],
    );
    run_cli(
        dir.path(),
        &[
            "baseline",
            "--corpus",
            "corpus.jsonl",
            "--split-dir",
            "splits",
            "--fit-split",
            "train",
            "--predict-split",
            "validation",
            "--out",
            "preds.jsonl",
        ],
    );
    run_cli(
        dir.path(),
        &[
            "evaluate",
            "--predictions",
            "preds.jsonl",
            "--corpus",
            "corpus.jsonl",
            "--split",
            "validation",
            "--split-dir",
            "splits",
            "--by-question-type",
            "--out",
            "eval",
        ],
    );

    let report: CliReport = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("eval/report.json")).unwrap(),
    )
    .unwrap();
    let split_manifest: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("splits/split_validation.json")).unwrap(),
    )
    .unwrap();
    let validation_size = split_manifest["members"].as_array().unwrap().len();

    let rows = report.by_question_type.as_ref().expect("per-type table");
    let group_total: usize = rows.iter().map(|r| r.report.n_pairs).sum();
    assert_eq!(
        group_total, validation_size,
        "group sizes must sum to the split size"
    );
    assert_eq!(report.evaluated_pairs, validation_size);

    // committed oracle fixture, computed offline over the joined pairs
    let expected: E2eExpected =
        serde_json::from_str(&std::fs::read_to_string(fixture_path("e2e_expected.json")).unwrap())
            .unwrap();
    let check = |name: &str, got: &CliMetricRow, want: &ExpectedReport| {
        assert_eq!(got.n_pairs, want.n_pairs, "{name} n_pairs");
        for (metric, g, w) in [
            ("bleu", got.bleu, want.bleu),
            ("rouge1", got.rouge1, want.rouge1),
            ("rouge2", got.rouge2, want.rouge2),
            ("rougeL", got.rouge_l, want.rouge_l),
            ("meteor", got.meteor, want.meteor),
        ] {
            assert!(
                (g - w).abs() <= TOLERANCE,
                "{name} {metric}: got {g}, expected {w}"
            );
        }
    };
    check("overall", &report.overall, &expected.overall);
    assert_eq!(rows.len(), expected.by_question_type.len());
    for (got, want) in rows.iter().zip(&expected.by_question_type) {
        assert_eq!(got.question_type, want.question_type);
        check(&got.question_type, &got.report, &want.report);
    }

    // a single-type evaluation must reproduce its unstratified report exactly
    let predictions = std::fs::read_to_string(dir.path().join("preds.jsonl")).unwrap();
    let single_type: String = predictions
        .lines()
        .filter(|line| {
            let v: serde_json::Value = serde_json::from_str(line).unwrap();
            v["question"]
                .as_str()
                .unwrap()
                .to_lowercase()
                .starts_with("is ")
        })
        .map(|l| format!("{l}\n"))
        .collect();
    assert!(!single_type.is_empty());
    std::fs::write(dir.path().join("preds_is.jsonl"), single_type).unwrap();
    run_cli(
        dir.path(),
        &[
            "evaluate",
            "--predictions",
            "preds_is.jsonl",
            "--corpus",
            "corpus.jsonl",
            "--split",
            "validation",
            "--split-dir",
            "splits",
            "--by-question-type",
            "--out",
            "eval_is",
        ],
    );
    let single: CliReport = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("eval_is/report.json")).unwrap(),
    )
    .unwrap();
    let rows = single.by_question_type.as_ref().unwrap();
    assert_eq!(rows.len(), 1, "exactly one question type expected");
    let (typed, overall) = (&rows[0].report, &single.overall);
    assert_eq!(typed.n_pairs, overall.n_pairs);
    assert_eq!(typed.bleu.to_bits(), overall.bleu.to_bits());
    assert_eq!(typed.rouge1.to_bits(), overall.rouge1.to_bits());
    assert_eq!(typed.rouge2.to_bits(), overall.rouge2.to_bits());
    assert_eq!(typed.rouge_l.to_bits(), overall.rouge_l.to_bits());
    assert_eq!(typed.meteor.to_bits(), overall.meteor.to_bits());

    println!(
        "[PASS] c6 end-to-end pipeline: {validation_size} validation pairs, per-type sums match, oracle fixture within {TOLERANCE}, single-type row bitwise-equal"
    );
}

#[test]
fn c7_eda_checks() {
    // 70% "no" answers
    let n = 1000usize;
    let mut triplets = Vec::new();
    for i in 0..n {
        let answer = if i % 10 < 7 {
            "no".to_string()
        } else {
            format!("answer {}", i % 4)
        };
        triplets.push(IqaTriplet {
            image_id: format!("img{i}"),
            source_label: "category".into(),
            question: "Is there something?".into(),
            answer,
        });
    }
    let corpus = Corpus::from_triplets(triplets).unwrap();

    let full = answer_frequency(&corpus, usize::MAX).unwrap();
    assert_eq!(
        full.total(),
        n as u64,
        "frequency counts must sum to corpus size"
    );
    assert_eq!(full.entries[0].0, "no");
    assert_eq!(full.entries[0].1, (n as f64 * 0.7) as u64);

    // planted modal answer length of 3 words
    let mut triplets = Vec::new();
    for i in 0..n {
        let answer = if i % 2 == 0 {
            "in the colon".to_string()
        } else if i % 4 == 1 {
            "no".to_string()
        } else {
            "a small polyp here".to_string()
        };
        triplets.push(IqaTriplet {
            image_id: format!("img{i}"),
            source_label: "category".into(),
            question: "Where?".into(),
            answer,
        });
    }
    let corpus = Corpus::from_triplets(triplets).unwrap();
    let histogram = answer_length_histogram(&corpus);
    assert_eq!(histogram.total(), n as u64);
    assert_eq!(histogram.mode(), Some(3), "planted modal length");

    println!("[PASS] c7 eda checks: frequency sums and top-1, histogram mode as planted");
}
