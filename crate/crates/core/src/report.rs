//! Manual labels and the precision-by-threshold table.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::detector::CandidateReplacement;

pub const LABEL_HEADER: [&str; 5] = ["repo", "sha", "method_signature", "api", "label"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Label {
    TruePositive,
    FalsePositive,
}

impl Label {
    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "tp" | "true_positive" | "truepositive" | "true positive" | "true" | "yes" | "1" => Some(Label::TruePositive),
            "fp" | "false_positive" | "falsepositive" | "false positive" | "false" | "no" | "0" => Some(Label::FalsePositive),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledCandidate {
    pub repo_id: String,
    pub sha: String,
    pub method_signature: String,
    pub api_simple_name: String,
    pub label: Label,
    pub annotator_ids: Vec<String>,
    pub conflict_resolved: bool,
    /// Copied from the resolved candidate.
    pub replacement_count: usize,
}

#[derive(Debug, thiserror::Error)]
pub enum ReportError {
    #[error("label file schema: {0}")]
    SchemaError(String),
    #[error("{0}")]
    UnresolvedLabel(Box<UnresolvedLabel>),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("label row {row} ({repo} {sha} {method} -> {api}) {problem}")]
pub struct UnresolvedLabel {
    pub row: usize,
    pub repo: String,
    pub sha: String,
    pub method: String,
    pub api: String,
    pub problem: String,
}

/// Reads a label CSV and resolves each row against `candidates`.
///
/// Required columns: `repo,sha,method_signature,api,label`. Optional:
/// `annotators` (`;`-separated) and `conflict_resolved`. A signature
/// matches either `name/arity` or the candidate's signature text; a sha
/// may be abbreviated.
pub fn import_labels(path: &Path, candidates: &[CandidateReplacement]) -> Result<Vec<LabeledCandidate>, ReportError> {
    let data = std::fs::read(path)?;
    parse_labels(&data, candidates)
}

pub fn parse_labels(data: &[u8], candidates: &[CandidateReplacement]) -> Result<Vec<LabeledCandidate>, ReportError> {
    if data.iter().all(u8::is_ascii_whitespace) {
        return Ok(Vec::new());
    }
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(data);
    let headers = rdr.headers().map_err(|e| ReportError::SchemaError(e.to_string()))?.clone();
    let col = |name: &str| headers.iter().position(|h| h.eq_ignore_ascii_case(name));
    let mut idx = [0usize; 5];
    for (slot, name) in idx.iter_mut().zip(LABEL_HEADER) {
        *slot = col(name).ok_or_else(|| ReportError::SchemaError(format!("missing column `{name}`")))?;
    }
    let annot_col = col("annotators");
    let resolved_col = col("conflict_resolved");

    let mut out = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let row = i + 2;
        let rec = rec.map_err(|e| ReportError::SchemaError(format!("row {row}: {e}")))?;
        let field = |k: usize| rec.get(k).unwrap_or("").to_string();
        let (repo, sha, method, api) = (field(idx[0]), field(idx[1]), field(idx[2]), field(idx[3]));
        let unresolved = |problem: &str| {
            ReportError::UnresolvedLabel(Box::new(UnresolvedLabel {
                row,
                repo: repo.clone(),
                sha: sha.clone(),
                method: method.clone(),
                api: api.clone(),
                problem: problem.to_string(),
            }))
        };
        let label = Label::parse(&field(idx[4]))
            .ok_or_else(|| ReportError::SchemaError(format!("row {row}: unknown label {:?}", field(idx[4]))))?;
        let matches: Vec<&CandidateReplacement> = candidates
            .iter()
            .filter(|c| {
                c.repo_id == repo
                    && !sha.is_empty()
                    && c.sha.starts_with(&sha)
                    && c.api_simple_name == api
                    && (c.method_signature() == method || c.custom_method.signature_text == method)
            })
            .collect();
        let c = match matches.as_slice() {
            [one] => *one,
            [] => return Err(unresolved("matches no candidate")),
            _ => return Err(unresolved("matches several candidates")),
        };
        let annotator_ids = annot_col
            .map(|k| field(k).split(';').map(str::trim).filter(|s| !s.is_empty()).map(String::from).collect())
            .unwrap_or_default();
        let conflict_resolved = resolved_col.is_some_and(|k| matches!(Label::parse(&field(k)), Some(Label::TruePositive)));
        out.push(LabeledCandidate {
            repo_id: repo.clone(),
            sha: c.sha.clone(),
            method_signature: c.method_signature(),
            api_simple_name: api.clone(),
            label,
            annotator_ids,
            conflict_resolved,
            replacement_count: c.replacement_count,
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrecisionRow {
    pub threshold: usize,
    pub instances: usize,
    pub true_positives: usize,
    /// Precision in tenths of a percent, rounded half up; `None` with no instances.
    pub precision_tenths: Option<u64>,
}

impl PrecisionRow {
    pub fn precision_text(&self) -> String {
        match self.precision_tenths {
            Some(t) => format!("{}.{}", t / 10, t % 10),
            None => "n/a".to_string(),
        }
    }
}

/// `round_half_up(1000 * tp / n)` in exact integer arithmetic.
pub fn precision_tenths(true_positives: usize, instances: usize) -> Option<u64> {
    if instances == 0 {
        return None;
    }
    let (tp, n) = (true_positives as u64, instances as u64);
    Some((2000 * tp + n) / (2 * n))
}

pub fn precision_report(labeled: &[LabeledCandidate], thresholds: &[usize]) -> Vec<PrecisionRow> {
    thresholds
        .iter()
        .map(|&t| {
            let kept = labeled.iter().filter(|l| l.replacement_count >= t);
            let (instances, true_positives) =
                kept.fold((0, 0), |(n, tp), l| (n + 1, tp + usize::from(l.label == Label::TruePositive)));
            PrecisionRow { threshold: t, instances, true_positives, precision_tenths: precision_tenths(true_positives, instances) }
        })
        .collect()
}

pub fn render_text(rows: &[PrecisionRow]) -> String {
    let header = ["t", "# Instances", "# True Positives", "Precision (%)"];
    let cells: Vec<[String; 4]> = rows
        .iter()
        .map(|r| [format!(">= {}", r.threshold), r.instances.to_string(), r.true_positives.to_string(), r.precision_text()])
        .collect();
    let mut widths = header.map(str::len);
    for row in &cells {
        for (w, c) in widths.iter_mut().zip(row) {
            *w = (*w).max(c.len());
        }
    }
    let mut out = String::new();
    let line = |out: &mut String, cols: [&str; 4]| {
        let _ = writeln!(out, "{:<w0$}  {:>w1$}  {:>w2$}  {:>w3$}", cols[0], cols[1], cols[2], cols[3], w0 = widths[0], w1 = widths[1], w2 = widths[2], w3 = widths[3]);
    };
    line(&mut out, header);
    for row in &cells {
        line(&mut out, [&row[0], &row[1], &row[2], &row[3]]);
    }
    out
}

pub fn render_csv(rows: &[PrecisionRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["threshold", "instances", "true_positives", "precision"]).expect("in-memory write");
    for r in rows {
        w.write_record([r.threshold.to_string(), r.instances.to_string(), r.true_positives.to_string(), r.precision_text()])
            .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}
