//! Report assembly and serialization.
//!
//! Evaluation runs produce one report carrying the full effective
//! configuration (including the root seed and the generator name), one row
//! per `(k, measure)` with raw/baseline/adjusted values, per-measure error
//! entries, and free-form diagnostics. Serialization is deterministic —
//! identical runs print identical bytes — and carries no timestamps or
//! timings, so re-running a logged configuration reproduces the report
//! bit for bit.

use std::fmt::Write as _;

use thiserror::Error;

use crate::baseline::AdjustedScore;
use crate::nccg::TopicScore;

/// Errors raised during report assembly.
#[derive(Debug, Error)]
pub enum ReportError {
    #[error("no measures computed")]
    NoMeasures,
}

/// Output encodings. CSV keeps one row per `(k, measure)` under the fixed
/// header `k,measure,raw,baseline_mean,adjusted`, with metadata in `#`
/// comment lines; JSON additionally carries baseline spread, sample
/// counts, and per-topic detail.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
}

/// One scored `(k, measure)` cell.
#[derive(Debug, Clone)]
pub struct ReportRow {
    /// Cluster count of the evaluated clustering.
    pub k: usize,
    pub measure: String,
    pub score: AdjustedScore,
    /// Per-topic detail, present for topic-based measures (JSON only).
    pub topics: Option<Vec<TopicScore>>,
}

/// A complete evaluation report.
#[derive(Debug, Clone)]
pub struct EvalReport {
    pub version: String,
    /// Name of the pseudo-random generator behind every seeded draw.
    pub rng: String,
    /// Effective configuration echo, in insertion order.
    pub config: Vec<(String, String)>,
    pub rows: Vec<ReportRow>,
    /// `(measure, message)` for measures that could not be computed.
    pub errors: Vec<(String, String)>,
    pub diagnostics: Vec<String>,
}

impl EvalReport {
    pub fn new(config: Vec<(String, String)>) -> EvalReport {
        EvalReport {
            version: env!("CARGO_PKG_VERSION").to_string(),
            rng: "chacha8".to_string(),
            config,
            rows: Vec::new(),
            errors: Vec::new(),
            diagnostics: Vec::new(),
        }
    }

    pub fn push_row(
        &mut self,
        k: usize,
        measure: impl Into<String>,
        score: AdjustedScore,
        topics: Option<Vec<TopicScore>>,
    ) {
        self.rows.push(ReportRow { k, measure: measure.into(), score, topics });
    }

    pub fn push_error(&mut self, measure: impl Into<String>, message: impl Into<String>) {
        self.errors.push((measure.into(), message.into()));
    }

    pub fn push_diagnostic(&mut self, message: impl Into<String>) {
        self.diagnostics.push(message.into());
    }
}

/// Serializes a report. A report with neither rows nor error entries
/// computed nothing and is refused.
pub fn write_report(report: &EvalReport, format: ReportFormat) -> Result<String, ReportError> {
    if report.rows.is_empty() && report.errors.is_empty() {
        return Err(ReportError::NoMeasures);
    }
    Ok(match format {
        ReportFormat::Json => write_json(report),
        ReportFormat::Csv => write_csv(report),
    })
}

fn fmt_float(x: f64) -> String {
    format!("{x:.6}")
}

fn escape_json(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out
}

fn write_json(report: &EvalReport) -> String {
    let mut out = String::new();
    out.push_str("{\n");
    let _ = writeln!(out, "  \"version\": \"{}\",", escape_json(&report.version));
    let _ = writeln!(out, "  \"rng\": \"{}\",", escape_json(&report.rng));

    out.push_str("  \"config\": {");
    for (i, (key, value)) in report.config.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        let _ = write!(out, "\n    \"{}\": \"{}\"", escape_json(key), escape_json(value));
    }
    out.push_str(if report.config.is_empty() { "},\n" } else { "\n  },\n" });

    // Rows grouped by measure, measures in first-appearance order.
    let mut measures: Vec<(&str, Vec<&ReportRow>)> = Vec::new();
    for row in &report.rows {
        match measures.iter_mut().find(|(name, _)| *name == row.measure) {
            Some((_, rows)) => rows.push(row),
            None => measures.push((&row.measure, vec![row])),
        }
    }
    out.push_str("  \"measures\": {");
    for (i, (name, rows)) in measures.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        let _ = write!(out, "\n    \"{}\": [", escape_json(name));
        for (j, row) in rows.iter().enumerate() {
            if j > 0 {
                out.push(',');
            }
            let s = &row.score;
            let _ = write!(
                out,
                "\n      {{\"k\": {}, \"raw\": {}, \"baseline_mean\": {}, \"baseline_std\": {}, \"adjusted\": {}, \"samples\": {}",
                row.k,
                fmt_float(s.raw),
                fmt_float(s.baseline_mean),
                fmt_float(s.baseline_std),
                fmt_float(s.adjusted),
                s.samples
            );
            if let Some(topics) = &row.topics {
                out.push_str(", \"topics\": [");
                for (t, topic) in topics.iter().enumerate() {
                    if t > 0 {
                        out.push_str(", ");
                    }
                    let _ = write!(
                        out,
                        "{{\"topic\": \"{}\", \"split\": {}, \"min_split\": {}, \"nccg\": {}}}",
                        escape_json(topic.topic.as_str()),
                        fmt_float(topic.split),
                        fmt_float(topic.min_split),
                        fmt_float(topic.nccg)
                    );
                }
                out.push(']');
            }
            out.push('}');
        }
        out.push_str("\n    ]");
    }
    out.push_str(if measures.is_empty() { "},\n" } else { "\n  },\n" });

    out.push_str("  \"errors\": {");
    for (i, (measure, message)) in report.errors.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        let _ = write!(out, "\n    \"{}\": \"{}\"", escape_json(measure), escape_json(message));
    }
    out.push_str(if report.errors.is_empty() { "},\n" } else { "\n  },\n" });

    out.push_str("  \"diagnostics\": [");
    for (i, diag) in report.diagnostics.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        let _ = write!(out, "\n    \"{}\"", escape_json(diag));
    }
    out.push_str(if report.diagnostics.is_empty() { "]\n" } else { "\n  ]\n" });
    out.push_str("}\n");
    out
}

fn write_csv(report: &EvalReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# version: {}", report.version);
    let _ = writeln!(out, "# rng: {}", report.rng);
    for (key, value) in &report.config {
        let _ = writeln!(out, "# config: {key}={value}");
    }
    for diag in &report.diagnostics {
        let _ = writeln!(out, "# diagnostic: {diag}");
    }
    for (measure, message) in &report.errors {
        let _ = writeln!(out, "# error: {measure}: {message}");
    }
    out.push_str("k,measure,raw,baseline_mean,adjusted\n");
    for row in &report.rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            row.k,
            row.measure,
            fmt_float(row.score.raw),
            fmt_float(row.score.baseline_mean),
            fmt_float(row.score.adjusted)
        );
    }
    out
}
