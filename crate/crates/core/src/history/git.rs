use std::io::{BufRead, BufReader, Read, Write};
use std::path::{Path, PathBuf};
use std::process::{Child, ChildStdin, ChildStdout, Command, Stdio};
use std::sync::Mutex;

use super::HistoryError;

pub const GIT_ENV: &str = "REUSE_MINER_GIT";

pub fn git_binary() -> String {
    std::env::var(GIT_ENV).ok().filter(|s| !s.trim().is_empty()).unwrap_or_else(|| "git".to_string())
}

/// Tree entry of a snapshot listing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeEntry {
    pub path: String,
    pub blob: String,
    pub size: u64,
}

struct CatFile {
    child: Child,
    stdin: ChildStdin,
    stdout: BufReader<ChildStdout>,
}

/// A local clone driven through the `git` executable.
pub struct GitRepo {
    path: PathBuf,
    git: String,
    cat_file: Mutex<Option<CatFile>>,
}

impl std::fmt::Debug for GitRepo {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GitRepo").field("path", &self.path).finish()
    }
}

impl GitRepo {
    pub fn open(path: &Path) -> Result<Self, HistoryError> {
        let repo = GitRepo { path: path.to_path_buf(), git: git_binary(), cat_file: Mutex::new(None) };
        match repo.run(&["rev-parse", "--git-dir"]) {
            Ok(_) => Ok(repo),
            Err(HistoryError::Git { .. }) => Err(HistoryError::NotARepository(path.display().to_string())),
            Err(e) => Err(e),
        }
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    fn command(&self) -> Command {
        let mut cmd = Command::new(&self.git);
        cmd.arg("-C")
            .arg(&self.path)
            .args(["-c", "core.quotePath=false", "-c", "diff.noprefix=false"])
            .env("GIT_TERMINAL_PROMPT", "0")
            .env("LC_ALL", "C");
        cmd
    }

    pub fn run(&self, args: &[&str]) -> Result<Vec<u8>, HistoryError> {
        let out = self
            .command()
            .args(args)
            .stdin(Stdio::null())
            .output()
            .map_err(|e| HistoryError::GitUnavailable(format!("{}: {e}", self.git)))?;
        if !out.status.success() {
            return Err(HistoryError::Git {
                args: args.join(" "),
                message: String::from_utf8_lossy(&out.stderr).trim().to_string(),
            });
        }
        Ok(out.stdout)
    }

    pub fn run_text(&self, args: &[&str]) -> Result<String, HistoryError> {
        self.run(args).map(|b| String::from_utf8_lossy(&b).into_owned())
    }

    pub fn has_commits(&self) -> bool {
        self.run(&["rev-parse", "--verify", "-q", "HEAD^{commit}"]).is_ok()
    }

    /// The remote HEAD branch when a remote is configured, else the local HEAD branch.
    pub fn default_branch(&self) -> Result<String, HistoryError> {
        if let Ok(r) = self.run_text(&["symbolic-ref", "-q", "refs/remotes/origin/HEAD"]) {
            let r = r.trim();
            if !r.is_empty() {
                return Ok(r.trim_start_matches("refs/remotes/").to_string());
            }
        }
        let head = self.run_text(&["symbolic-ref", "-q", "HEAD"])?;
        Ok(head.trim().trim_start_matches("refs/heads/").to_string())
    }

    pub fn resolve_commit(&self, rev: &str) -> Result<String, HistoryError> {
        let spec = format!("{rev}^{{commit}}");
        self.run_text(&["rev-parse", "--verify", "-q", &spec])
            .map(|s| s.trim().to_string())
            .map_err(|_| HistoryError::MissingCommit(rev.to_string()))
    }

    /// `.java` blobs of a commit's tree, sorted by path.
    pub fn java_tree(&self, sha: &str) -> Result<Vec<TreeEntry>, HistoryError> {
        self.resolve_commit(sha)?;
        let out = self.run(&["ls-tree", "-r", "-l", "-z", "--full-tree", sha])?;
        let mut entries = Vec::new();
        for rec in out.split(|b| *b == 0).filter(|r| !r.is_empty()) {
            let rec = String::from_utf8_lossy(rec);
            let Some((meta, path)) = rec.split_once('\t') else {
                return Err(HistoryError::Malformed(format!("ls-tree record {rec:?}")));
            };
            let fields: Vec<&str> = meta.split_whitespace().collect();
            if fields.len() < 4 || fields[1] != "blob" || !path.ends_with(".java") {
                continue;
            }
            entries.push(TreeEntry {
                path: path.to_string(),
                blob: fields[2].to_string(),
                size: fields[3].parse().unwrap_or(0),
            });
        }
        entries.sort_by(|a, b| a.path.cmp(&b.path));
        Ok(entries)
    }

    /// Reads a blob through a long-lived `git cat-file --batch` process.
    pub fn read_blob(&self, oid: &str) -> Result<Vec<u8>, HistoryError> {
        let mut guard = self.cat_file.lock().expect("cat-file lock poisoned");
        if guard.is_none() {
            let mut child = self
                .command()
                .args(["cat-file", "--batch"])
                .stdin(Stdio::piped())
                .stdout(Stdio::piped())
                .stderr(Stdio::null())
                .spawn()
                .map_err(|e| HistoryError::GitUnavailable(format!("{}: {e}", self.git)))?;
            let stdin = child.stdin.take().expect("piped stdin");
            let stdout = BufReader::new(child.stdout.take().expect("piped stdout"));
            *guard = Some(CatFile { child, stdin, stdout });
        }
        let cf = guard.as_mut().expect("initialized");
        let result = (|| -> Result<Vec<u8>, HistoryError> {
            writeln!(cf.stdin, "{oid}")?;
            cf.stdin.flush()?;
            let mut header = String::new();
            cf.stdout.read_line(&mut header)?;
            let fields: Vec<&str> = header.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(HistoryError::MissingCommit(format!("blob {oid}: {}", header.trim())));
            }
            let size: usize = fields[2]
                .parse()
                .map_err(|_| HistoryError::Malformed(format!("cat-file header {header:?}")))?;
            let mut buf = vec![0u8; size + 1];
            cf.stdout.read_exact(&mut buf)?;
            buf.truncate(size);
            Ok(buf)
        })();
        if matches!(result, Err(HistoryError::Io(_))) {
            // the pipe is in an unknown state; restart on next use
            if let Some(mut old) = guard.take() {
                let _ = old.child.kill();
                let _ = old.child.wait();
            }
        }
        result
    }
}

impl Drop for GitRepo {
    fn drop(&mut self) {
        if let Ok(mut guard) = self.cat_file.lock() {
            if let Some(mut cf) = guard.take() {
                drop(cf.stdin);
                let _ = cf.child.wait();
            }
        }
    }
}
