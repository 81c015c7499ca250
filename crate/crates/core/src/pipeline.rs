//! Per-repository analysis: history walk, snapshots, pairs, detection.

use std::io::{BufRead, BufReader};
use std::process::{Command, Stdio};
use std::sync::Arc;

use log::debug;

use crate::detector::{self, CandidateReplacement, DetectStats, Detection};
use crate::history::{
    self, git_binary, ChangeKind, GitRepo, HistoryError, ParseCache, SnapshotBuilder, DEFAULT_MAX_FILE_BYTES,
};
use crate::library::ApiIndex;

#[derive(Debug, Clone)]
pub struct AnalyzeOptions {
    pub branch: Option<String>,
    /// Keep every step's condition traces in the result.
    pub keep_traces: bool,
    pub max_file_bytes: u64,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions { branch: None, keep_traces: false, max_file_bytes: DEFAULT_MAX_FILE_BYTES }
    }
}

#[derive(Debug, Clone, Default)]
pub struct RepoAnalysis {
    pub repo_id: String,
    pub steps: usize,
    pub candidates: Vec<CandidateReplacement>,
    pub stats: DetectStats,
    /// Per-step detections (only with `keep_traces`).
    pub detections: Vec<Detection>,
}

impl RepoAnalysis {
    pub fn detection(&self, sha: &str) -> Option<&Detection> {
        self.detections.iter().find(|d| d.sha == sha)
    }
}

pub fn analyze_repo(repo: &GitRepo, repo_id: &str, index: &ApiIndex, opts: &AnalyzeOptions) -> Result<RepoAnalysis, HistoryError> {
    let steps = history::linear_history(repo, repo_id, opts.branch.as_deref())?;
    let mut out = RepoAnalysis { repo_id: repo_id.to_string(), steps: steps.len(), ..RepoAnalysis::default() };
    let Some(first) = steps.first() else { return Ok(out) };
    let builder = SnapshotBuilder::new(repo, Arc::new(ParseCache::new())).with_max_file_bytes(opts.max_file_bytes);
    let mut before = builder.full(&first.parent_sha)?;
    for step in &steps {
        if before.sha() != step.parent_sha {
            before = builder.full(&step.parent_sha)?;
        }
        let after = builder.advance(&before, &step.sha)?;
        let mut pairs = Vec::new();
        for f in &step.changed_java_files {
            if matches!(f.change, ChangeKind::Modified | ChangeKind::Renamed { .. }) && f.path.ends_with(".java") {
                pairs.extend(history::word_diff(repo, &step.parent_sha, &step.sha, f)?);
            }
        }
        if !pairs.is_empty() {
            let d = detector::detect(step, &before, &after, &pairs, index);
            debug!("{repo_id} {}: {} pairs, {} candidates", step.sha, pairs.len(), d.candidates.len());
            out.stats.merge(&d.stats);
            out.candidates.extend(d.candidates.iter().cloned());
            if opts.keep_traces {
                out.detections.push(d);
            }
        }
        before = after;
    }
    Ok(out)
}

/// Whether any first-parent commit adds an import line that resolves to an
/// indexed package. Streams `git log -p` instead of parsing snapshots.
pub fn adds_indexed_import(repo: &GitRepo, index: &ApiIndex) -> Result<bool, HistoryError> {
    if !repo.has_commits() {
        return Ok(false);
    }
    let git = git_binary();
    let mut child = Command::new(&git)
        .arg("-C")
        .arg(repo.path())
        .args(["log", "--first-parent", "-p", "-U0", "--no-color", "--no-ext-diff", "--format=", "--", "*.java"])
        .env("LC_ALL", "C")
        .stdin(Stdio::null())
        .stdout(Stdio::piped())
        .stderr(Stdio::null())
        .spawn()
        .map_err(|e| HistoryError::GitUnavailable(format!("{git}: {e}")))?;
    let stdout = child.stdout.take().expect("piped stdout");
    let mut found = false;
    for line in BufReader::new(stdout).split(b'\n') {
        let line = line?;
        let Some(rest) = line.strip_prefix(b"+") else { continue };
        let text = String::from_utf8_lossy(rest);
        if let Some(path) = import_path(&text) {
            if package_prefixes(path).any(|p| index.libraries_for_package(p).is_some()) {
                found = true;
                break;
            }
        }
    }
    if found {
        let _ = child.kill();
    }
    let _ = child.wait();
    Ok(found)
}

fn import_path(line: &str) -> Option<&str> {
    let rest = line.trim_start().strip_prefix("import")?;
    if !rest.starts_with(char::is_whitespace) {
        return None;
    }
    let rest = rest.trim_start();
    let rest = rest.strip_prefix("static").filter(|r| r.starts_with(char::is_whitespace)).unwrap_or(rest);
    let path = rest.trim_start().split(';').next()?.trim();
    let path = path.strip_suffix(".*").unwrap_or(path);
    (!path.is_empty()).then_some(path)
}

fn package_prefixes(path: &str) -> impl Iterator<Item = &str> {
    std::iter::once(path).chain(path.rmatch_indices('.').map(move |(i, _)| &path[..i]))
}
