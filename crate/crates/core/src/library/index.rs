use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use log::{debug, warn};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{ApiIndex, ApiRecord, LibraryCoordinate, LibraryError, Repository};
use crate::parser;

/// One library to index: a coordinate resolved against a repository, or a
/// pre-unpacked source tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LibrarySource {
    Remote { group_id: String, artifact_id: String, version: Option<String> },
    Local { path: PathBuf, coordinate: LibraryCoordinate },
}

impl LibrarySource {
    /// `group:artifact` or `group:artifact:version`.
    pub fn parse_remote(spec: &str) -> Result<Self, LibraryError> {
        let parts: Vec<&str> = spec.trim().split(':').collect();
        match parts.as_slice() {
            [g, a] if !g.is_empty() && !a.is_empty() => Ok(LibrarySource::Remote {
                group_id: g.to_string(),
                artifact_id: a.to_string(),
                version: None,
            }),
            [g, a, v] => {
                let c = LibraryCoordinate::new(g, a, v)?;
                Ok(LibrarySource::Remote { group_id: c.group_id, artifact_id: c.artifact_id, version: Some(c.version) })
            }
            _ => Err(LibraryError::InvalidCoordinate(spec.to_string())),
        }
    }

    /// Every subdirectory of `dir` is one library. Its coordinate comes from
    /// a `coordinate.txt` file (`group:artifact:version`) when present, and
    /// is `local:<dirname>:local` otherwise.
    pub fn scan_local_dir(dir: &Path) -> Result<Vec<Self>, LibraryError> {
        let mut out = Vec::new();
        let mut entries: Vec<_> = std::fs::read_dir(dir)?
            .filter_map(Result::ok)
            .map(|e| e.path())
            .filter(|p| p.is_dir())
            .collect();
        entries.sort();
        for path in entries {
            let name = path.file_name().unwrap_or_default().to_string_lossy().into_owned();
            let coordinate = match std::fs::read_to_string(path.join("coordinate.txt")) {
                Ok(text) => text.trim().parse()?,
                Err(_) => LibraryCoordinate::new("local", &name, "local")?,
            };
            out.push(LibrarySource::Local { path, coordinate });
        }
        Ok(out)
    }

    pub fn label(&self) -> String {
        match self {
            LibrarySource::Remote { group_id, artifact_id, version } => {
                format!("{group_id}:{artifact_id}:{}", version.as_deref().unwrap_or("latest"))
            }
            LibrarySource::Local { path, coordinate } => format!("{coordinate} ({})", path.display()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkippedLibrary {
    pub library: String,
    pub reason: String,
}

#[derive(Debug, Clone)]
pub struct IndexBuild {
    pub index: ApiIndex,
    pub indexed: Vec<LibraryCoordinate>,
    pub skipped: Vec<SkippedLibrary>,
    /// Files whose parse was degraded, as `coordinate path`.
    pub degraded_files: Vec<String>,
}

struct LibraryIndex {
    coordinate: LibraryCoordinate,
    apis: Vec<ApiRecord>,
    packages: BTreeSet<String>,
    degraded: Vec<String>,
}

/// Public methods and declared packages of one unpacked source tree.
/// Packages come from `package` declarations, not from directory layout.
pub fn index_library(source_tree: &Path, coord: &LibraryCoordinate) -> Result<(Vec<ApiRecord>, BTreeSet<String>), LibraryError> {
    let idx = index_tree(source_tree, coord)?;
    Ok((idx.apis, idx.packages))
}

fn index_tree(source_tree: &Path, coord: &LibraryCoordinate) -> Result<LibraryIndex, LibraryError> {
    if !source_tree.is_dir() {
        return Err(LibraryError::NotFound(source_tree.display().to_string()));
    }
    let mut files = Vec::new();
    collect_java_files(source_tree, &mut files)?;
    files.sort();
    let mut apis = Vec::new();
    let mut packages = BTreeSet::new();
    let mut degraded = Vec::new();
    for file in files {
        let rel = file
            .strip_prefix(source_tree)
            .unwrap_or(&file)
            .components()
            .map(|c| c.as_os_str().to_string_lossy())
            .collect::<Vec<_>>()
            .join("/");
        let bytes = std::fs::read(&file)?;
        let surface = parser::parse_bytes(&bytes, &rel);
        if surface.parse_degraded || surface.lossy_decoding {
            debug!("{coord}: degraded parse of {rel}");
            degraded.push(format!("{coord} {rel}"));
        }
        let package = surface.package_name.clone().unwrap_or_default();
        if surface.package_name.is_some() {
            packages.insert(package.clone());
        }
        for decl in surface.declarations.iter().filter(|d| d.is_public()) {
            packages.insert(package.clone());
            apis.push(ApiRecord {
                library: coord.clone(),
                package_name: package.clone(),
                file_path: rel.clone(),
                simple_name: decl.simple_name.clone(),
                arity: decl.arity,
                signature_text: decl.signature_text.clone(),
                deprecated: decl.is_deprecated(),
            });
        }
    }
    Ok(LibraryIndex { coordinate: coord.clone(), apis, packages, degraded })
}

fn collect_java_files(dir: &Path, out: &mut Vec<PathBuf>) -> std::io::Result<()> {
    for entry in std::fs::read_dir(dir)? {
        let entry = entry?;
        let path = entry.path();
        let ft = entry.file_type()?;
        if ft.is_dir() {
            collect_java_files(&path, out)?;
        } else if ft.is_file()
            && path.extension().is_some_and(|e| e == "java")
            && path.file_name().is_some_and(|n| n != "module-info.java")
        {
            out.push(path);
        }
    }
    Ok(())
}

/// Resolves, fetches and indexes every library in parallel. Failures skip
/// only the affected library.
pub fn build_index(sources: &[LibrarySource], repo: &Repository, cache_dir: &Path, jobs: usize) -> IndexBuild {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .expect("thread pool");
    let results: Vec<Result<LibraryIndex, SkippedLibrary>> = pool.install(|| {
        sources
            .par_iter()
            .map(|src| {
                index_source(src, repo, cache_dir).map_err(|e| {
                    warn!("skipping library {}: {e}", src.label());
                    SkippedLibrary { library: src.label(), reason: e.to_string() }
                })
            })
            .collect()
    });

    let mut libs = Vec::new();
    let mut skipped = Vec::new();
    for r in results {
        match r {
            Ok(l) => libs.push(l),
            Err(s) => skipped.push(s),
        }
    }
    libs.sort_by(|a, b| a.coordinate.cmp(&b.coordinate));
    libs.dedup_by(|a, b| a.coordinate == b.coordinate);

    let mut apis = Vec::new();
    let mut packages: BTreeMap<String, BTreeSet<LibraryCoordinate>> = BTreeMap::new();
    let mut degraded_files = Vec::new();
    let mut indexed = Vec::new();
    for lib in libs {
        for p in &lib.packages {
            packages.entry(p.clone()).or_default().insert(lib.coordinate.clone());
        }
        apis.extend(lib.apis);
        degraded_files.extend(lib.degraded);
        indexed.push(lib.coordinate);
    }
    IndexBuild { index: ApiIndex::new(apis, packages), indexed, skipped, degraded_files }
}

fn index_source(src: &LibrarySource, repo: &Repository, cache_dir: &Path) -> Result<LibraryIndex, LibraryError> {
    match src {
        LibrarySource::Local { path, coordinate } => index_tree(path, coordinate),
        LibrarySource::Remote { group_id, artifact_id, version } => {
            let coord = match version {
                Some(v) => LibraryCoordinate::new(group_id, artifact_id, v)?,
                None => repo.resolve_latest_version(group_id, artifact_id)?,
            };
            let tree = repo.fetch_library_sources(&coord, cache_dir)?;
            index_tree(&tree, &coord)
        }
    }
}
