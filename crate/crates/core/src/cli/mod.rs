//! Command-line front end: `mine-libs`, `analyze`, `filter`, `cluster`,
//! `report` and the fused `run`.

mod config;
mod stages;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use log::error;

pub use config::{ConfigError, PipelineConfig};
pub use stages::{
    cmd_analyze, cmd_cluster, cmd_filter, cmd_mine_libs, cmd_report, read_repo_list, AnalyzeSummary, LedgerEntry, Outcome,
    RepoRef, RepoStatus, StageError, ANALYZE_DIR, CANDIDATES_FILE, FILTERED_FILE, INDEX_DIR, LEDGER_FILE, REPORT_CSV_FILE,
    REPORT_TEXT_FILE, STATS_FILE,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_PARTIAL: i32 = 2;
pub const EXIT_FAILURE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "reuse-miner", version, about = "Find commits that replaced a custom method with a library API")]
pub struct Cli {
    /// Directory holding every stage's inputs and outputs.
    #[arg(long, global = true)]
    pub work_dir: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// TOML or JSON configuration file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// More logging (-v info, -vv debug).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Cmd,
}

#[derive(Debug, Subcommand)]
pub enum Cmd {
    /// Build the API index from library coordinates or local source trees.
    MineLibs(MineLibsArgs),
    /// Detect candidate replacements in every listed repository.
    Analyze(AnalyzeArgs),
    /// Drop trivial methods and candidates below the threshold.
    Filter(FilterArgs),
    /// Group filtered candidates into rules by API.
    Cluster,
    /// Precision per threshold from manual labels.
    Report(ReportArgs),
    /// analyze, filter and cluster in one go.
    Run(RunArgs),
}

#[derive(Debug, Args)]
pub struct MineLibsArgs {
    /// `group:artifact[:version]`; repeatable.
    #[arg(long = "lib")]
    pub libs: Vec<String>,
    /// Directory of unpacked library sources, one subdirectory per library.
    #[arg(long)]
    pub lib_dir: Vec<PathBuf>,
    /// Maven repository base URL (`file://` works too).
    #[arg(long, env = "REUSE_MINER_REPOSITORY_URL")]
    pub repository_url: Option<String>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Repository list: `owner/name`, a clone directory, or `owner/name <dir>` per line.
    #[arg(long)]
    pub repos: Option<PathBuf>,
    /// Branch to walk instead of the default one.
    #[arg(long)]
    pub branch: Option<String>,
    /// Stop after this many newly analyzed repositories.
    #[arg(long, hide = true)]
    pub stop_after: Option<usize>,
}

#[derive(Debug, Args)]
pub struct FilterArgs {
    /// Minimum number of replaced call sites (t).
    #[arg(long)]
    pub min_replacements: Option<usize>,
    /// Keep getters, setters and main methods.
    #[arg(long)]
    pub keep_trivial: bool,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// CSV with `repo,sha,method_signature,api,label`.
    #[arg(long)]
    pub labels: PathBuf,
    #[arg(long, value_delimiter = ',', default_value = "1,2,3,4,5")]
    pub thresholds: Vec<usize>,
    /// Candidates the labels refer to (default: the work dir's candidates.jsonl).
    #[arg(long)]
    pub candidates: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub analyze: AnalyzeArgs,
    #[command(flatten)]
    pub filter: FilterArgs,
}

fn apply_filter(cfg: &mut PipelineConfig, f: &FilterArgs) {
    if let Some(t) = f.min_replacements {
        cfg.selector.min_replacements = t;
    }
    if f.keep_trivial {
        cfg.selector.drop_trivial = false;
    }
}

fn apply_analyze(cfg: &mut PipelineConfig, a: &AnalyzeArgs) {
    if let Some(r) = &a.repos {
        cfg.repos = Some(r.clone());
    }
    if let Some(b) = &a.branch {
        cfg.branch = Some(b.clone());
    }
}

fn outcome_code(o: Outcome) -> i32 {
    match o {
        Outcome::Success => EXIT_OK,
        Outcome::Partial => EXIT_PARTIAL,
        Outcome::Failure => EXIT_FAILURE,
    }
}

fn stage_code(e: &StageError) -> i32 {
    match e {
        StageError::Usage(_) => EXIT_USAGE,
        _ => EXIT_FAILURE,
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).try_init();
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            error!("{e}");
            eprintln!("error: {e}");
            stage_code(&e)
        }
    }
}

fn execute(cli: Cli) -> Result<i32, StageError> {
    let mut cfg = match &cli.config {
        Some(p) => PipelineConfig::load(p).map_err(|e| StageError::Usage(e.to_string()))?,
        None => PipelineConfig::default(),
    };
    if let Some(w) = cli.work_dir {
        cfg.work_dir = w;
    }
    if let Some(j) = cli.jobs {
        cfg.jobs = j;
    }
    match &cli.command {
        Cmd::MineLibs(a) => {
            cfg.libraries.extend(a.libs.iter().cloned());
            cfg.lib_dirs.extend(a.lib_dir.iter().cloned());
            if a.repository_url.is_some() {
                cfg.repository_url = a.repository_url.clone();
            }
        }
        Cmd::Analyze(a) => apply_analyze(&mut cfg, a),
        Cmd::Filter(f) => apply_filter(&mut cfg, f),
        Cmd::Run(r) => {
            apply_analyze(&mut cfg, &r.analyze);
            apply_filter(&mut cfg, &r.filter);
        }
        Cmd::Cluster | Cmd::Report(_) => {}
    }
    cfg.validate().map_err(|e| StageError::Usage(e.to_string()))?;

    match &cli.command {
        Cmd::MineLibs(_) => cmd_mine_libs(&cfg).map(outcome_code),
        Cmd::Analyze(a) => {
            let (o, s) = cmd_analyze(&cfg, a.stop_after)?;
            eprintln!(
                "{} repositories: {} analyzed, {} skipped, {} failed; {} candidates",
                s.repos, s.analyzed, s.skipped_by_prepass, s.failed, s.candidates
            );
            Ok(outcome_code(o))
        }
        Cmd::Filter(_) => cmd_filter(&cfg).map(|_| EXIT_OK),
        Cmd::Cluster => cmd_cluster(&cfg).map(|_| EXIT_OK),
        Cmd::Report(r) => {
            let text = cmd_report(&cfg, &r.labels, &r.thresholds, r.candidates.as_deref())?;
            print!("{text}");
            Ok(EXIT_OK)
        }
        Cmd::Run(r) => {
            let (o, _) = cmd_analyze(&cfg, r.analyze.stop_after)?;
            if o == Outcome::Failure {
                return Ok(EXIT_FAILURE);
            }
            cmd_filter(&cfg)?;
            cmd_cluster(&cfg)?;
            Ok(outcome_code(o))
        }
    }
}
