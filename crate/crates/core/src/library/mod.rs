//! API index construction: resolve library coordinates, fetch their source
//! archives and record every public method and declared package.

mod index;
mod maven;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use index::{build_index, index_library, IndexBuild, LibrarySource, SkippedLibrary};
pub use maven::{compare_versions, latest_from_metadata, Repository, DEFAULT_REPOSITORY, REPOSITORY_ENV};

#[derive(Debug, thiserror::Error)]
pub enum LibraryError {
    #[error("not found: {0}")]
    NotFound(String),
    #[error("network error fetching {url}: {message}")]
    Network { url: String, message: String },
    #[error("corrupt archive {0}: {1}")]
    ArchiveCorrupt(String, String),
    #[error("cannot parse repository metadata: {0}")]
    MetadataParse(String),
    #[error("invalid coordinate {0:?}")]
    InvalidCoordinate(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("malformed index file {path}: {message}")]
    IndexFormat { path: String, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LibraryCoordinate {
    pub group_id: String,
    pub artifact_id: String,
    pub version: String,
}

impl LibraryCoordinate {
    pub fn new(group_id: &str, artifact_id: &str, version: &str) -> Result<Self, LibraryError> {
        if group_id.is_empty() || artifact_id.is_empty() || version.is_empty() {
            return Err(LibraryError::InvalidCoordinate(format!("{group_id}:{artifact_id}:{version}")));
        }
        Ok(LibraryCoordinate {
            group_id: group_id.to_string(),
            artifact_id: artifact_id.to_string(),
            version: version.to_string(),
        })
    }
}

impl fmt::Display for LibraryCoordinate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.group_id, self.artifact_id, self.version)
    }
}

impl FromStr for LibraryCoordinate {
    type Err = LibraryError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        match parts.as_slice() {
            [g, a, v] => LibraryCoordinate::new(g, a, v),
            _ => Err(LibraryError::InvalidCoordinate(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApiRecord {
    pub library: LibraryCoordinate,
    pub package_name: String,
    pub file_path: String,
    pub simple_name: String,
    pub arity: usize,
    pub signature_text: String,
    #[serde(default)]
    pub deprecated: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct PackageLine {
    package: String,
    libraries: Vec<LibraryCoordinate>,
}

pub const API_INDEX_FILE: &str = "api-index.jsonl";
pub const PACKAGES_FILE: &str = "packages.jsonl";

/// Immutable after construction; lookups by name and by (name, arity).
#[derive(Debug, Clone, Default)]
pub struct ApiIndex {
    apis: Vec<ApiRecord>,
    packages: BTreeMap<String, BTreeSet<LibraryCoordinate>>,
    by_name: HashMap<String, Vec<usize>>,
}

impl ApiIndex {
    pub fn new(apis: Vec<ApiRecord>, packages: BTreeMap<String, BTreeSet<LibraryCoordinate>>) -> Self {
        let mut packages = packages;
        for api in &apis {
            packages
                .entry(api.package_name.clone())
                .or_default()
                .insert(api.library.clone());
        }
        let mut by_name: HashMap<String, Vec<usize>> = HashMap::new();
        for (i, api) in apis.iter().enumerate() {
            by_name.entry(api.simple_name.clone()).or_default().push(i);
        }
        ApiIndex { apis, packages, by_name }
    }

    pub fn apis(&self) -> &[ApiRecord] {
        &self.apis
    }

    pub fn packages(&self) -> &BTreeMap<String, BTreeSet<LibraryCoordinate>> {
        &self.packages
    }

    pub fn libraries_for_package(&self, package: &str) -> Option<&BTreeSet<LibraryCoordinate>> {
        self.packages.get(package)
    }

    pub fn by_name<'a>(&'a self, name: &str) -> impl Iterator<Item = &'a ApiRecord> + 'a {
        self.by_name
            .get(name)
            .into_iter()
            .flatten()
            .map(move |&i| &self.apis[i])
    }

    pub fn by_signature<'a>(&'a self, name: &str, arity: usize) -> impl Iterator<Item = &'a ApiRecord> + 'a {
        self.by_name(name).filter(move |a| a.arity == arity)
    }

    pub fn libraries(&self) -> BTreeSet<&LibraryCoordinate> {
        self.packages.values().flatten().collect()
    }

    /// `api-index.jsonl` then `packages.jsonl` contents.
    pub fn to_jsonl(&self) -> (String, String) {
        let mut apis = String::new();
        for api in &self.apis {
            apis.push_str(&serde_json::to_string(api).expect("serializable"));
            apis.push('\n');
        }
        let mut packages = String::new();
        for (package, libs) in &self.packages {
            let line = PackageLine { package: package.clone(), libraries: libs.iter().cloned().collect() };
            packages.push_str(&serde_json::to_string(&line).expect("serializable"));
            packages.push('\n');
        }
        (apis, packages)
    }

    pub fn write_to_dir(&self, dir: &std::path::Path) -> Result<(), LibraryError> {
        std::fs::create_dir_all(dir)?;
        let (apis, packages) = self.to_jsonl();
        crate::io::write_atomic(&dir.join(API_INDEX_FILE), apis.as_bytes())?;
        crate::io::write_atomic(&dir.join(PACKAGES_FILE), packages.as_bytes())?;
        Ok(())
    }

    pub fn load_from_dir(dir: &std::path::Path) -> Result<Self, LibraryError> {
        let apis: Vec<ApiRecord> = read_jsonl(&dir.join(API_INDEX_FILE))?;
        let lines: Vec<PackageLine> = read_jsonl(&dir.join(PACKAGES_FILE))?;
        let packages = lines
            .into_iter()
            .map(|l| (l.package, l.libraries.into_iter().collect()))
            .collect();
        Ok(ApiIndex::new(apis, packages))
    }
}

fn read_jsonl<T: serde::de::DeserializeOwned>(path: &std::path::Path) -> Result<Vec<T>, LibraryError> {
    let text = std::fs::read_to_string(path)?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(n, l)| {
            serde_json::from_str(l).map_err(|e| LibraryError::IndexFormat {
                path: path.display().to_string(),
                message: format!("line {}: {e}", n + 1),
            })
        })
        .collect()
}
