//! Line-oriented readers and writers for clusterings, ground-truth labels,
//! TREC-style relevance judgments, and sparse term-count corpora.
//!
//! All formats are plain UTF-8 text with LF or CRLF line endings. Blank
//! lines and lines starting with `#` are skipped. Parsers are total on their
//! error domain: malformed input is rejected with the offending line (and
//! column where it applies) and never yields a partial structure.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::model::{
    CategoryId, ClusterId, Clustering, DocId, GroundTruth, ModelError, RelevanceJudgments, TermId,
    TopicId,
};
use crate::vsm::SparseCorpus;

/// Errors raised while reading one of the text formats.
#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}, column {col}: {message}")]
    Malformed { line: usize, col: usize, message: String },
    #[error("line {line}: duplicate entry for document {doc}")]
    DuplicateDoc { line: usize, doc: String },
    #[error("no data lines found")]
    Empty,
    #[error(transparent)]
    Model(#[from] ModelError),
}

fn malformed(line: usize, col: usize, message: impl Into<String>) -> ParseError {
    ParseError::Malformed { line, col, message: message.into() }
}

/// Data lines of `text` with 1-based line numbers; blank and `#` lines are
/// skipped and a trailing `\r` (CRLF input) is stripped.
fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        let trimmed = line.trim_start();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            None
        } else {
            Some((i + 1, line))
        }
    })
}

/// Splits a line on tabs, keeping the 1-based column where each field starts.
fn tab_fields(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut col = 1;
    for field in line.split('\t') {
        out.push((col, field));
        col += field.chars().count() + 1;
    }
    out
}

/// Splits a line on whitespace runs, keeping the 1-based column of each field.
fn whitespace_fields(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut field_start = None;
    for (col, ch) in line.chars().enumerate() {
        match (ch.is_whitespace(), field_start) {
            (false, None) => field_start = Some(col),
            (true, Some(start)) => {
                out.push((start + 1, &line[byte_of(line, start)..byte_of(line, col)]));
                field_start = None;
            }
            _ => {}
        }
    }
    if let Some(start) = field_start {
        out.push((start + 1, &line[byte_of(line, start)..]));
    }
    out
}

fn byte_of(s: &str, char_idx: usize) -> usize {
    s.char_indices().nth(char_idx).map_or(s.len(), |(b, _)| b)
}

/// Parses the shared two-column `document<TAB>value` layout, validating both
/// fields as id tokens and rejecting duplicate documents.
fn parse_two_columns(
    text: &str,
    second_field: &str,
) -> Result<Vec<(usize, String, String)>, ParseError> {
    let mut rows: Vec<(usize, String, String)> = Vec::new();
    let mut seen: BTreeMap<&str, usize> = BTreeMap::new();
    for (line, content) in data_lines(text) {
        let fields = tab_fields(content);
        if fields.len() != 2 {
            return Err(malformed(
                line,
                1,
                format!(
                    "expected 2 tab-separated fields (document<TAB>{second_field}), found {}",
                    fields.len()
                ),
            ));
        }
        for (col, token) in &fields {
            if token.is_empty() || token.chars().any(char::is_whitespace) {
                return Err(malformed(
                    line,
                    *col,
                    format!("field {token:?} must be a non-empty token without whitespace"),
                ));
            }
        }
        rows.push((line, fields[0].1.to_string(), fields[1].1.to_string()));
    }
    if rows.is_empty() {
        return Err(ParseError::Empty);
    }
    for (line, doc, _) in &rows {
        if seen.insert(doc.as_str(), *line).is_some() {
            return Err(ParseError::DuplicateDoc { line: *line, doc: doc.clone() });
        }
    }
    Ok(rows)
}

/// Reads a clustering from `document<TAB>cluster` lines.
pub fn parse_clustering(text: &str) -> Result<Clustering, ParseError> {
    let rows = parse_two_columns(text, "cluster")?;
    let pairs = rows
        .into_iter()
        .map(|(_, doc, cluster)| Ok((DocId::new(doc)?, ClusterId::new(cluster)?)))
        .collect::<Result<Vec<_>, ModelError>>()?;
    Ok(Clustering::from_assignments(pairs)?)
}

/// Reads ground-truth labels from `document<TAB>category` lines — the same
/// physical format as [`parse_clustering`], including the one-entry-per-
/// document rule.
pub fn parse_labels(text: &str) -> Result<GroundTruth, ParseError> {
    let rows = parse_two_columns(text, "category")?;
    let pairs = rows
        .into_iter()
        .map(|(_, doc, category)| Ok((DocId::new(doc)?, CategoryId::new(category)?)))
        .collect::<Result<Vec<_>, ModelError>>()?;
    Ok(GroundTruth::from_labels(pairs)?)
}

/// Reads TREC-style relevance judgments: four whitespace-separated columns
/// `topic iteration document relevance`. The iteration column is ignored,
/// relevance must be an integer ≥ 0, a document is relevant to a topic when
/// any of its judgments is positive, and duplicate `(topic, document)` pairs
/// keep the maximum relevance.
pub fn parse_qrels(text: &str) -> Result<RelevanceJudgments, ParseError> {
    let mut judgments = RelevanceJudgments::new();
    let mut saw_data = false;
    for (line, content) in data_lines(text) {
        let fields = whitespace_fields(content);
        if fields.len() != 4 {
            return Err(malformed(
                line,
                1,
                format!(
                    "expected 4 whitespace-separated fields (topic iteration document relevance), found {}",
                    fields.len()
                ),
            ));
        }
        let (rel_col, rel_token) = fields[3];
        let relevance: u64 = rel_token.parse().map_err(|_| {
            malformed(line, rel_col, format!("relevance must be an integer >= 0, got {rel_token:?}"))
        })?;
        let topic = TopicId::new(fields[0].1)
            .map_err(|e| malformed(line, fields[0].0, e.to_string()))?;
        let doc =
            DocId::new(fields[2].1).map_err(|e| malformed(line, fields[2].0, e.to_string()))?;
        judgments.observe(topic, doc, relevance);
        saw_data = true;
    }
    if !saw_data {
        return Err(ParseError::Empty);
    }
    Ok(judgments)
}

/// Reads a sparse term-count corpus from `document<TAB>term<TAB>count`
/// triples. Counts must be integers ≥ 1; duplicate `(document, term)` pairs
/// are summed.
pub fn parse_corpus(text: &str) -> Result<SparseCorpus, ParseError> {
    let mut counts: BTreeMap<DocId, BTreeMap<TermId, u64>> = BTreeMap::new();
    let mut saw_data = false;
    for (line, content) in data_lines(text) {
        let fields = tab_fields(content);
        if fields.len() != 3 {
            return Err(malformed(
                line,
                1,
                format!(
                    "expected 3 tab-separated fields (document<TAB>term<TAB>count), found {}",
                    fields.len()
                ),
            ));
        }
        let doc = DocId::new(fields[0].1)
            .map_err(|e| malformed(line, fields[0].0, e.to_string()))?;
        let term = TermId::new(fields[1].1)
            .map_err(|e| malformed(line, fields[1].0, e.to_string()))?;
        let (count_col, count_token) = fields[2];
        let count: u64 = count_token.parse().map_err(|_| {
            malformed(line, count_col, format!("count must be an integer >= 1, got {count_token:?}"))
        })?;
        if count == 0 {
            return Err(malformed(line, count_col, "count must be an integer >= 1, got 0"));
        }
        *counts.entry(doc).or_default().entry(term).or_insert(0) += count;
        saw_data = true;
    }
    if !saw_data {
        return Err(ParseError::Empty);
    }
    Ok(SparseCorpus::from_counts(counts))
}

/// Serializes a clustering as `document<TAB>cluster` lines in ascending
/// document order. `parse_clustering` of the output reproduces the input.
pub fn write_clustering(clustering: &Clustering) -> String {
    let mut out = String::new();
    for (doc, cluster) in clustering.assignments() {
        out.push_str(doc.as_str());
        out.push('\t');
        out.push_str(cluster.as_str());
        out.push('\n');
    }
    out
}

/// Serializes ground-truth labels as `document<TAB>category` lines in
/// ascending document order.
pub fn write_labels(truth: &GroundTruth) -> String {
    let mut out = String::new();
    for (doc, category) in truth.labels() {
        out.push_str(doc.as_str());
        out.push('\t');
        out.push_str(category.as_str());
        out.push('\n');
    }
    out
}
