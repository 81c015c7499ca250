use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::selector::SelectorConfig;

/// Settings shared by all stages. Loaded from a TOML or JSON file and
/// overridden by command-line flags.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    /// `group:artifact[:version]` coordinates.
    pub libraries: Vec<String>,
    /// Directories whose subdirectories are unpacked library sources.
    pub lib_dirs: Vec<PathBuf>,
    pub repos: Option<PathBuf>,
    pub work_dir: PathBuf,
    pub selector: SelectorConfig,
    pub jobs: usize,
    pub repository_url: Option<String>,
    pub branch: Option<String>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            libraries: Vec::new(),
            lib_dirs: Vec::new(),
            repos: None,
            work_dir: PathBuf::from("work"),
            selector: SelectorConfig::default(),
            jobs: std::thread::available_parallelism().map_or(1, |n| n.get()),
            repository_url: None,
            branch: None,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("config {path}: {message}")]
    Parse { path: String, message: String },
    #[error("invalid config: {0}")]
    Invalid(String),
}

impl PipelineConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read { path: path.display().to_string(), source })?;
        let parse_err = |message: String| ConfigError::Parse { path: path.display().to_string(), message };
        let mut cfg: PipelineConfig = if path.extension().is_some_and(|e| e == "json") {
            serde_json::from_str(&text).map_err(|e| parse_err(e.to_string()))?
        } else {
            toml::from_str(&text).map_err(|e| parse_err(e.to_string()))?
        };
        // relative paths in a config file are relative to the file
        let base = path.parent().unwrap_or(Path::new("."));
        let rebase = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        rebase(&mut cfg.work_dir);
        cfg.lib_dirs.iter_mut().for_each(rebase);
        if let Some(r) = cfg.repos.as_mut() {
            rebase(r);
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.jobs == 0 {
            return Err(ConfigError::Invalid("jobs must be at least 1".into()));
        }
        if self.selector.min_replacements == 0 {
            return Err(ConfigError::Invalid("min_replacements must be at least 1".into()));
        }
        Ok(())
    }
}
