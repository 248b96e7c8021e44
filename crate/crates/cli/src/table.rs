//! Result tables in text, markdown, and CSV with the five metric columns.
//! Scores render at three decimal places, rounded half up, with a `.`
//! decimal point regardless of locale.

use clap::ValueEnum;
use gi_vqa_core::metrics::MetricReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Text,
    Markdown,
    Csv,
}

/// Three-decimal half-up rendering of a score in [0, 1].
pub fn format_score(score: f64) -> String {
    let scaled = (score * 1000.0 + 0.5).floor().clamp(0.0, 1000.0) as u64;
    format!("{}.{:03}", scaled / 1000, scaled % 1000)
}

const METRIC_HEADERS: [&str; 5] = ["BLEU", "R-1", "R-2", "R-L", "METEOR"];

fn row_cells(label: &str, report: &MetricReport) -> Vec<String> {
    vec![
        label.to_string(),
        report.n_pairs.to_string(),
        format_score(report.bleu),
        format_score(report.rouge1),
        format_score(report.rouge2),
        format_score(report.rouge_l),
        format_score(report.meteor),
    ]
}

/// Render labeled report rows. `label_header` names the first column
/// ("set" for overall tables, "question_type" for stratified ones).
pub fn render_table(
    label_header: &str,
    rows: &[(String, MetricReport)],
    format: TableFormat,
) -> String {
    let mut header = vec![label_header.to_string(), "n".to_string()];
    header.extend(METRIC_HEADERS.iter().map(|h| h.to_string()));
    let body: Vec<Vec<String>> = rows
        .iter()
        .map(|(label, report)| row_cells(label, report))
        .collect();

    match format {
        TableFormat::Csv => {
            let mut writer = csv::Writer::from_writer(Vec::new());
            writer.write_record(&header).expect("in-memory write");
            for row in &body {
                writer.write_record(row).expect("in-memory write");
            }
            String::from_utf8(writer.into_inner().expect("flushed")).expect("utf-8")
        }
        TableFormat::Markdown => {
            let mut out = String::new();
            out.push_str(&format!("| {} |\n", header.join(" | ")));
            out.push_str(&format!("|{}\n", "----|".repeat(header.len())));
            for row in &body {
                out.push_str(&format!("| {} |\n", row.join(" | ")));
            }
            out
        }
        TableFormat::Text => {
            let mut widths: Vec<usize> = header.iter().map(String::len).collect();
            for row in &body {
                for (i, cell) in row.iter().enumerate() {
                    widths[i] = widths[i].max(cell.len());
                }
            }
            let mut out = String::new();
            for row in std::iter::once(&header).chain(&body) {
                let line: Vec<String> = row
                    .iter()
                    .enumerate()
                    .map(|(i, cell)| format!("{cell:<width$}", width = widths[i]))
                    .collect();
                out.push_str(line.join("  ").trim_end());
                out.push('\n');
            }
            out
        }
    }
}
