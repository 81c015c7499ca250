use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::Command;

use log::{info, warn};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::PipelineConfig;
use crate::clustering::{cluster_by_rhs, RULES_FILE};
use crate::detector::{CandidateReplacement, DetectStats};
use crate::history::{git_binary, GitRepo};
use crate::io::{read_jsonl, to_jsonl, write_atomic, JsonlAppender, JsonlError};
use crate::library::{build_index, ApiIndex, LibraryError, LibrarySource, Repository};
use crate::pipeline::{adds_indexed_import, analyze_repo, AnalyzeOptions};
use crate::report::{import_labels, precision_report, render_csv, render_text, ReportError};
use crate::selector::select;

pub const INDEX_DIR: &str = "index";
pub const CANDIDATES_FILE: &str = "candidates.jsonl";
pub const FILTERED_FILE: &str = "filtered.jsonl";
pub const ANALYZE_DIR: &str = "analyze";
pub const LEDGER_FILE: &str = "ledger.jsonl";
pub const STATS_FILE: &str = "analyze-stats.json";
pub const REPORT_TEXT_FILE: &str = "report.txt";
pub const REPORT_CSV_FILE: &str = "report.csv";

/// How a stage ended; maps onto the process exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success,
    Partial,
    Failure,
}

impl Outcome {
    fn of(ok: usize, failed: usize) -> Self {
        match (ok, failed) {
            (_, 0) => Outcome::Success,
            (0, _) => Outcome::Failure,
            _ => Outcome::Partial,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum StageError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("{0}")]
    Failed(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Jsonl(#[from] JsonlError),
    #[error(transparent)]
    Library(#[from] LibraryError),
    #[error(transparent)]
    Report(#[from] ReportError),
}

pub fn cmd_mine_libs(cfg: &PipelineConfig) -> Result<Outcome, StageError> {
    let mut sources = Vec::new();
    for spec in &cfg.libraries {
        sources.push(LibrarySource::parse_remote(spec).map_err(|e| StageError::Usage(e.to_string()))?);
    }
    for dir in &cfg.lib_dirs {
        sources.extend(LibrarySource::scan_local_dir(dir)?);
    }
    if sources.is_empty() {
        return Err(StageError::Usage("no libraries given (--lib, --lib-dir or `libraries` in the config)".into()));
    }
    let repo = match &cfg.repository_url {
        Some(url) => Repository::new(url),
        None => Repository::from_env(),
    };
    let built = build_index(&sources, &repo, &cfg.work_dir.join("cache").join("libs"), cfg.jobs);
    for f in &built.degraded_files {
        warn!("degraded parse: {f}");
    }
    let outcome = Outcome::of(built.indexed.len(), built.skipped.len());
    if outcome == Outcome::Failure {
        return Ok(outcome);
    }
    let dir = cfg.work_dir.join(INDEX_DIR);
    built.index.write_to_dir(&dir)?;
    write_atomic(&dir.join("skipped.jsonl"), to_jsonl(&built.skipped).as_bytes())?;
    info!(
        "indexed {} libraries ({} APIs, {} packages), skipped {}",
        built.indexed.len(),
        built.index.apis().len(),
        built.index.packages().len(),
        built.skipped.len()
    );
    Ok(outcome)
}

/// One line of the repository list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepoRef {
    pub repo_id: String,
    /// Local clone; `None` means clone `https://github.com/<repo_id>`.
    pub path: Option<PathBuf>,
}

/// Lines are `owner/name`, a clone directory, or `owner/name <dir>`.
/// Blank lines and `#` comments are ignored; relative directories are
/// resolved against the list file's directory.
pub fn read_repo_list(path: &Path) -> Result<Vec<RepoRef>, StageError> {
    let text = std::fs::read_to_string(path)?;
    let base = path.parent().unwrap_or(Path::new("."));
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let resolve = |p: &str| {
            let p = PathBuf::from(p);
            if p.is_relative() {
                base.join(p)
            } else {
                p
            }
        };
        let r = match line.split_once(char::is_whitespace) {
            Some((id, dir)) => RepoRef { repo_id: id.to_string(), path: Some(resolve(dir.trim())) },
            None if resolve(line).is_dir() => {
                let p = resolve(line);
                let name = p.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| line.to_string());
                RepoRef { repo_id: format!("local/{name}"), path: Some(p) }
            }
            None if line.split('/').count() == 2 && !line.starts_with('/') => RepoRef { repo_id: line.to_string(), path: None },
            None => return Err(StageError::Usage(format!("{}:{}: not a directory or owner/name: {line}", path.display(), n + 1))),
        };
        out.push(r);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RepoStatus {
    Done,
    Skipped,
    Failed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LedgerEntry {
    pub repo_id: String,
    pub status: RepoStatus,
    pub candidates: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
struct RepoStats {
    repo_id: String,
    steps: usize,
    #[serde(flatten)]
    stats: DetectStats,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct AnalyzeSummary {
    pub repos: usize,
    pub analyzed: usize,
    pub skipped_by_prepass: usize,
    pub failed: usize,
    pub steps: usize,
    pub candidates: usize,
    pub funnel: DetectStats,
}

fn safe_name(repo_id: &str) -> String {
    repo_id.chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '.' { c } else { '_' }).collect()
}

fn clone_if_needed(r: &RepoRef, clones: &Path) -> Result<PathBuf, String> {
    if let Some(p) = &r.path {
        return Ok(p.clone());
    }
    let dest = clones.join(safe_name(&r.repo_id));
    if dest.join(".git").exists() || dest.join("HEAD").exists() {
        return Ok(dest);
    }
    std::fs::create_dir_all(clones).map_err(|e| e.to_string())?;
    let partial = clones.join(format!("{}.partial", safe_name(&r.repo_id)));
    let _ = std::fs::remove_dir_all(&partial);
    let url = format!("https://github.com/{}.git", r.repo_id);
    let out = Command::new(git_binary())
        .args(["clone", "--quiet", "--no-checkout", &url])
        .arg(&partial)
        .env("GIT_TERMINAL_PROMPT", "0")
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        let _ = std::fs::remove_dir_all(&partial);
        return Err(format!("clone {url}: {}", String::from_utf8_lossy(&out.stderr).trim()));
    }
    std::fs::rename(&partial, &dest).map_err(|e| e.to_string())?;
    Ok(dest)
}

fn analyze_one(r: &RepoRef, cfg: &PipelineConfig, index: &ApiIndex, out_dir: &Path) -> LedgerEntry {
    let fail = |e: String| {
        warn!("{}: {e}", r.repo_id);
        LedgerEntry { repo_id: r.repo_id.clone(), status: RepoStatus::Failed, candidates: 0, error: Some(e) }
    };
    let path = match clone_if_needed(r, &cfg.work_dir.join("clones")) {
        Ok(p) => p,
        Err(e) => return fail(e),
    };
    let repo = match GitRepo::open(&path) {
        Ok(repo) => repo,
        Err(e) => return fail(e.to_string()),
    };
    let name = safe_name(&r.repo_id);
    let cand_path = out_dir.join(format!("{name}.jsonl"));
    let stats_path = out_dir.join(format!("{name}.stats.json"));
    match adds_indexed_import(&repo, index) {
        Ok(false) => {
            info!("{}: no import of an indexed package, skipped", r.repo_id);
            let written = write_atomic(&cand_path, b"").and_then(|_| {
                let s = RepoStats { repo_id: r.repo_id.clone(), ..RepoStats::default() };
                write_atomic(&stats_path, serde_json::to_string(&s).expect("serializable").as_bytes())
            });
            if let Err(e) = written {
                return fail(e.to_string());
            }
            return LedgerEntry { repo_id: r.repo_id.clone(), status: RepoStatus::Skipped, candidates: 0, error: None };
        }
        Ok(true) => {}
        Err(e) => return fail(e.to_string()),
    }
    let opts = AnalyzeOptions { branch: cfg.branch.clone(), ..AnalyzeOptions::default() };
    let analysis = match analyze_repo(&repo, &r.repo_id, index, &opts) {
        Ok(a) => a,
        Err(e) => return fail(e.to_string()),
    };
    let stats = RepoStats { repo_id: r.repo_id.clone(), steps: analysis.steps, stats: analysis.stats };
    let written = write_atomic(&cand_path, to_jsonl(&analysis.candidates).as_bytes())
        .and_then(|_| write_atomic(&stats_path, serde_json::to_string(&stats).expect("serializable").as_bytes()));
    if let Err(e) = written {
        return fail(e.to_string());
    }
    info!("{}: {} steps, {} candidates", r.repo_id, analysis.steps, analysis.candidates.len());
    LedgerEntry { repo_id: r.repo_id.clone(), status: RepoStatus::Done, candidates: analysis.candidates.len(), error: None }
}

/// Detects candidates in every listed repository. Finished repositories
/// are recorded in a ledger and not redone; `stop_after` ends the run after
/// that many newly processed repositories (the final outputs are then
/// not assembled).
pub fn cmd_analyze(cfg: &PipelineConfig, stop_after: Option<usize>) -> Result<(Outcome, AnalyzeSummary), StageError> {
    let list = cfg
        .repos
        .as_ref()
        .ok_or_else(|| StageError::Usage("no repository list (--repos or `repos` in the config)".into()))?;
    let repos = read_repo_list(list)?;
    let mut ids = std::collections::BTreeSet::new();
    for r in &repos {
        if !ids.insert(r.repo_id.as_str()) {
            return Err(StageError::Usage(format!("repository {} listed twice", r.repo_id)));
        }
    }
    let index_dir = cfg.work_dir.join(INDEX_DIR);
    let index = ApiIndex::load_from_dir(&index_dir)
        .map_err(|e| StageError::Usage(format!("no API index in {} ({e}); run mine-libs first", index_dir.display())))?;

    let out_dir = cfg.work_dir.join(ANALYZE_DIR);
    std::fs::create_dir_all(&out_dir)?;
    let ledger_path = out_dir.join(LEDGER_FILE);
    let mut finished: BTreeMap<String, LedgerEntry> = BTreeMap::new();
    if ledger_path.exists() {
        for e in read_ledger(&ledger_path)? {
            if e.status == RepoStatus::Failed {
                finished.remove(&e.repo_id);
            } else if out_dir.join(format!("{}.jsonl", safe_name(&e.repo_id))).exists() {
                finished.insert(e.repo_id.clone(), e);
            }
        }
    }
    let mut todo: Vec<&RepoRef> = repos.iter().filter(|r| !finished.contains_key(&r.repo_id)).collect();
    let interrupted = stop_after.is_some_and(|n| n < todo.len());
    if let Some(n) = stop_after {
        todo.truncate(n);
    }
    if !finished.is_empty() {
        info!("resuming: {} repositories already done", finished.len());
    }

    let ledger = JsonlAppender::open(&ledger_path)?;
    let pool = rayon::ThreadPoolBuilder::new().num_threads(cfg.jobs.max(1)).build().expect("thread pool");
    let results: Vec<LedgerEntry> = pool.install(|| {
        todo.par_iter()
            .map(|r| {
                let entry = analyze_one(r, cfg, &index, &out_dir);
                if let Err(e) = ledger.append_all(std::slice::from_ref(&entry)) {
                    warn!("ledger write failed: {e}");
                }
                entry
            })
            .collect()
    });
    for e in results {
        finished.insert(e.repo_id.clone(), e);
    }

    let mut summary = AnalyzeSummary { repos: repos.len(), ..AnalyzeSummary::default() };
    for r in &repos {
        match finished.get(&r.repo_id).map(|e| &e.status) {
            Some(RepoStatus::Done) => summary.analyzed += 1,
            Some(RepoStatus::Skipped) => summary.skipped_by_prepass += 1,
            Some(RepoStatus::Failed) => summary.failed += 1,
            None => {}
        }
    }
    if interrupted {
        return Ok((Outcome::Partial, summary));
    }

    let mut all = Vec::new();
    for r in &repos {
        if finished.get(&r.repo_id).is_some_and(|e| e.status != RepoStatus::Failed) {
            let name = safe_name(&r.repo_id);
            all.extend(std::fs::read(out_dir.join(format!("{name}.jsonl")))?);
            let s: RepoStats = serde_json::from_slice(&std::fs::read(out_dir.join(format!("{name}.stats.json")))?)
                .map_err(|e| StageError::Failed(format!("stats of {}: {e}", r.repo_id)))?;
            summary.steps += s.steps;
            summary.funnel.merge(&s.stats);
        }
    }
    summary.candidates = all.iter().filter(|b| **b == b'\n').count();
    write_atomic(&cfg.work_dir.join(CANDIDATES_FILE), &all)?;
    write_atomic(
        &cfg.work_dir.join(STATS_FILE),
        (serde_json::to_string_pretty(&summary).expect("serializable") + "\n").as_bytes(),
    )?;
    let ok = summary.analyzed + summary.skipped_by_prepass;
    Ok((Outcome::of(ok, summary.failed), summary))
}

/// Ledger entries; a torn last line from an interrupted write is ignored.
fn read_ledger(path: &Path) -> Result<Vec<LedgerEntry>, StageError> {
    let text = std::fs::read_to_string(path)?;
    Ok(text
        .lines()
        .filter(|l| !l.trim().is_empty())
        .filter_map(|l| match serde_json::from_str(l) {
            Ok(e) => Some(e),
            Err(e) => {
                warn!("ignoring ledger line {l:?}: {e}");
                None
            }
        })
        .collect())
}

fn load_candidates(path: &Path) -> Result<Vec<CandidateReplacement>, StageError> {
    if !path.exists() {
        return Err(StageError::Usage(format!("{} not found; run the previous stage first", path.display())));
    }
    Ok(read_jsonl(path)?)
}

pub fn cmd_filter(cfg: &PipelineConfig) -> Result<usize, StageError> {
    let candidates = load_candidates(&cfg.work_dir.join(CANDIDATES_FILE))?;
    let kept = select(&candidates, &cfg.selector);
    write_atomic(&cfg.work_dir.join(FILTERED_FILE), to_jsonl(&kept).as_bytes())?;
    info!("kept {} of {} candidates", kept.len(), candidates.len());
    Ok(kept.len())
}

pub fn cmd_cluster(cfg: &PipelineConfig) -> Result<usize, StageError> {
    let candidates = load_candidates(&cfg.work_dir.join(FILTERED_FILE))?;
    let rules = cluster_by_rhs(&candidates);
    write_atomic(&cfg.work_dir.join(RULES_FILE), to_jsonl(&rules).as_bytes())?;
    info!("{} rules from {} candidates", rules.len(), candidates.len());
    Ok(rules.len())
}

/// Returns the rendered text table.
pub fn cmd_report(cfg: &PipelineConfig, labels: &Path, thresholds: &[usize], candidates: Option<&Path>) -> Result<String, StageError> {
    if thresholds.is_empty() || thresholds.contains(&0) {
        return Err(StageError::Usage("thresholds must be positive integers".into()));
    }
    let default = cfg.work_dir.join(CANDIDATES_FILE);
    let candidates = load_candidates(candidates.unwrap_or(&default))?;
    let labeled = import_labels(labels, &candidates)?;
    let rows = precision_report(&labeled, thresholds);
    let text = render_text(&rows);
    write_atomic(&cfg.work_dir.join(REPORT_TEXT_FILE), text.as_bytes())?;
    write_atomic(&cfg.work_dir.join(REPORT_CSV_FILE), render_csv(&rows).as_bytes())?;
    Ok(text)
}
