//! First-parent history walking, per-snapshot declaration/invocation
//! indices and word-diff pair extraction over a local git clone.

mod git;
mod snapshot;
mod word_diff;

use serde::{Deserialize, Serialize};

pub use git::{git_binary, GitRepo, TreeEntry, GIT_ENV};
pub use snapshot::{FileEntry, ParseCache, SnapshotBuilder, SnapshotIndex, DEFAULT_MAX_FILE_BYTES};
pub use word_diff::{parse_word_diff, replaced_pairs, Segment, WordDiffLine};

#[derive(Debug, thiserror::Error)]
pub enum HistoryError {
    #[error("not a git repository: {0}")]
    NotARepository(String),
    #[error("unknown branch: {0}")]
    UnknownBranch(String),
    #[error("missing commit or object: {0}")]
    MissingCommit(String),
    #[error("git {args} failed: {message}")]
    Git { args: String, message: String },
    #[error("git executable unavailable: {0}")]
    GitUnavailable(String),
    #[error("malformed git output: {0}")]
    Malformed(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ChangeKind {
    Modified,
    Renamed { old_path: String },
    Added,
    Deleted,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChangedFile {
    pub path: String,
    #[serde(flatten)]
    pub change: ChangeKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommitStep {
    pub repo_id: String,
    pub sha: String,
    pub parent_sha: String,
    pub message: String,
    pub changed_java_files: Vec<ChangedFile>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReplacedCallPair {
    pub file_path: String,
    pub old_fragment: String,
    pub new_fragment: String,
    pub line_hint: u32,
}

/// Steps of the first-parent chain of `branch` (default: remote HEAD
/// branch, else local HEAD), oldest first. The root commit has no parent
/// snapshot and is not a step.
pub fn linear_history(repo: &GitRepo, repo_id: &str, branch: Option<&str>) -> Result<Vec<CommitStep>, HistoryError> {
    if !repo.has_commits() {
        if let Some(b) = branch {
            if repo.resolve_commit(b).is_err() && repo.default_branch().ok().as_deref() != Some(b) {
                return Err(HistoryError::UnknownBranch(b.to_string()));
            }
        }
        return Ok(Vec::new());
    }
    let branch = match branch {
        Some(b) => b.to_string(),
        None => repo.default_branch()?,
    };
    let tip = repo
        .resolve_commit(&branch)
        .map_err(|_| HistoryError::UnknownBranch(branch.clone()))?;
    let out = repo.run_text(&[
        "log",
        "--first-parent",
        "--reverse",
        "--diff-merges=first-parent",
        "-M",
        "--name-status",
        "--format=%x1e%H%x00%P%x00%B%x00",
        &tip,
    ])?;
    let mut steps = Vec::new();
    for record in out.split('\x1e').filter(|r| !r.trim().is_empty()) {
        let mut fields = record.splitn(4, '\0');
        let sha = fields.next().unwrap_or_default().trim().to_string();
        let parents = fields.next().unwrap_or_default();
        let message = fields.next().unwrap_or_default().trim_end().to_string();
        let status = fields.next().unwrap_or_default();
        if sha.len() != 40 {
            return Err(HistoryError::Malformed(format!("log record {record:?}")));
        }
        let Some(parent) = parents.split_whitespace().next() else { continue };
        steps.push(CommitStep {
            repo_id: repo_id.to_string(),
            sha,
            parent_sha: parent.to_string(),
            message,
            changed_java_files: parse_name_status(status)?,
        });
    }
    Ok(steps)
}

fn parse_name_status(text: &str) -> Result<Vec<ChangedFile>, HistoryError> {
    let mut files = Vec::new();
    for line in text.lines().filter(|l| !l.trim().is_empty()) {
        let cols: Vec<&str> = line.split('\t').collect();
        let code = cols[0].chars().next().unwrap_or(' ');
        let (path, change) = match (code, cols.as_slice()) {
            ('M' | 'T', [_, p]) => (*p, ChangeKind::Modified),
            ('A', [_, p]) => (*p, ChangeKind::Added),
            ('D', [_, p]) => (*p, ChangeKind::Deleted),
            ('R', [_, old, new]) => (*new, ChangeKind::Renamed { old_path: old.to_string() }),
            ('C', [_, _, new]) => (*new, ChangeKind::Added),
            _ => return Err(HistoryError::Malformed(format!("name-status line {line:?}"))),
        };
        let old_is_java = matches!(&change, ChangeKind::Renamed { old_path } if old_path.ends_with(".java"));
        if path.ends_with(".java") || old_is_java {
            files.push(ChangedFile { path: path.to_string(), change });
        }
    }
    Ok(files)
}

/// Word-diff of one modified or renamed file between two snapshots, as
/// adjacent `[-old-]{+new+}` pairs.
pub fn word_diff(repo: &GitRepo, parent_sha: &str, sha: &str, file: &ChangedFile) -> Result<Vec<ReplacedCallPair>, HistoryError> {
    let mut args = vec![
        "diff",
        "--no-color",
        "--no-ext-diff",
        parent_sha,
        sha,
        "--word-diff",
        "--unified=0",
        "--ignore-all-space",
        "-M",
        "--",
    ];
    if let ChangeKind::Renamed { old_path } = &file.change {
        args.push(old_path);
    }
    args.push(&file.path);
    let out = repo.run_text(&args)?;
    let lines = parse_word_diff(&out)?;
    Ok(replaced_pairs(&lines, &file.path))
}
