use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use dashmap::DashMap;
use log::info;
use serde::Serialize;

use super::git::{GitRepo, TreeEntry};
use super::HistoryError;
use crate::parser::{self, FileSurface, ImportStatement, MethodDeclaration, MethodInvocation};

pub const DEFAULT_MAX_FILE_BYTES: u64 = 1 << 20;

/// Parse results keyed by (blob id, path). Values are a pure function of
/// the key, so concurrent inserts of the same key are interchangeable.
#[derive(Debug, Default)]
pub struct ParseCache {
    map: DashMap<(String, String), Arc<FileSurface>>,
}

impl ParseCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    fn get_or_parse(&self, repo: &GitRepo, entry: &TreeEntry) -> Result<Arc<FileSurface>, HistoryError> {
        let key = (entry.blob.clone(), entry.path.clone());
        if let Some(hit) = self.map.get(&key) {
            return Ok(Arc::clone(&hit));
        }
        let bytes = repo.read_blob(&entry.blob)?;
        let surface = Arc::new(parser::parse_bytes(&bytes, &entry.path));
        self.map.insert(key, Arc::clone(&surface));
        Ok(surface)
    }
}

#[derive(Debug, Clone)]
pub struct FileEntry {
    pub blob: String,
    pub surface: Arc<FileSurface>,
}

/// Declarations (D), invocations (I) and imports of one snapshot.
#[derive(Debug, Clone, Default)]
pub struct SnapshotIndex {
    sha: String,
    files: BTreeMap<String, FileEntry>,
    skipped_large: Vec<String>,
    decl_by_sig: HashMap<(String, usize), usize>,
    decl_by_name: HashMap<String, usize>,
    call_by_sig: HashMap<(String, usize), usize>,
    call_by_name: HashMap<String, usize>,
}

#[derive(Serialize)]
struct Canonical<'a> {
    sha: &'a str,
    files: Vec<CanonicalFile<'a>>,
    skipped_large: &'a [String],
    declarations_by_signature: Vec<(&'a str, usize, usize)>,
    invocations_by_signature: Vec<(&'a str, usize, usize)>,
}

#[derive(Serialize)]
struct CanonicalFile<'a> {
    path: &'a str,
    blob: &'a str,
    surface: &'a FileSurface,
}

impl SnapshotIndex {
    /// Snapshot built from already-parsed files; blob ids are left empty.
    pub fn from_surfaces(sha: &str, surfaces: impl IntoIterator<Item = FileSurface>) -> Self {
        let mut snap = SnapshotIndex { sha: sha.to_string(), ..SnapshotIndex::default() };
        for surface in surfaces {
            if let Some(old) = snap.files.remove(&surface.file_path) {
                snap.add_counts(&old.surface, -1);
            }
            snap.add_counts(&surface, 1);
            let path = surface.file_path.clone();
            snap.files.insert(path, FileEntry { blob: String::new(), surface: Arc::new(surface) });
        }
        snap
    }

    pub fn sha(&self) -> &str {
        &self.sha
    }

    pub fn files(&self) -> &BTreeMap<String, FileEntry> {
        &self.files
    }

    pub fn skipped_large(&self) -> &[String] {
        &self.skipped_large
    }

    pub fn file(&self, path: &str) -> Option<&FileSurface> {
        self.files.get(path).map(|f| f.surface.as_ref())
    }

    pub fn declaration_count(&self) -> usize {
        self.decl_by_name.values().sum()
    }

    pub fn invocation_count(&self) -> usize {
        self.call_by_name.values().sum()
    }

    pub fn has_declaration(&self, name: &str, arity: usize) -> bool {
        self.decl_by_sig.get(&(name.to_string(), arity)).is_some_and(|&c| c > 0)
    }

    pub fn has_declaration_named(&self, name: &str) -> bool {
        self.decl_by_name.get(name).is_some_and(|&c| c > 0)
    }

    pub fn has_invocation_named(&self, name: &str) -> bool {
        self.call_by_name.get(name).is_some_and(|&c| c > 0)
    }

    pub fn invocation_count_named(&self, name: &str) -> usize {
        self.call_by_name.get(name).copied().unwrap_or(0)
    }

    pub fn declarations(&self) -> impl Iterator<Item = &MethodDeclaration> {
        self.files.values().flat_map(|f| f.surface.declarations.iter())
    }

    pub fn invocations(&self) -> impl Iterator<Item = &MethodInvocation> {
        self.files.values().flat_map(|f| f.surface.invocations.iter())
    }

    /// Declarations matching (name, arity), in path order.
    pub fn find_declarations<'a>(&'a self, name: &'a str, arity: usize) -> impl Iterator<Item = &'a MethodDeclaration> + 'a {
        self.declarations()
            .filter(move |d| d.simple_name == name && d.arity == arity)
    }

    pub fn imports_of(&self, path: &str) -> &[ImportStatement] {
        self.files.get(path).map_or(&[], |f| f.surface.imports.as_slice())
    }

    /// Deterministic serialization covering file contents and the
    /// aggregated counts.
    pub fn to_canonical_json(&self) -> String {
        fn sorted(m: &HashMap<(String, usize), usize>) -> Vec<(&str, usize, usize)> {
            let mut v: Vec<(&str, usize, usize)> = m
                .iter()
                .filter(|(_, &c)| c > 0)
                .map(|((n, a), &c)| (n.as_str(), *a, c))
                .collect();
            v.sort();
            v
        }
        let canon = Canonical {
            sha: &self.sha,
            files: self
                .files
                .iter()
                .map(|(p, f)| CanonicalFile { path: p, blob: &f.blob, surface: &f.surface })
                .collect(),
            skipped_large: &self.skipped_large,
            declarations_by_signature: sorted(&self.decl_by_sig),
            invocations_by_signature: sorted(&self.call_by_sig),
        };
        serde_json::to_string(&canon).expect("serializable")
    }

    fn add_counts(&mut self, s: &FileSurface, sign: isize) {
        fn bump<K: std::hash::Hash + Eq>(m: &mut HashMap<K, usize>, k: K, sign: isize) {
            let e = m.entry(k).or_insert(0);
            *e = (*e as isize + sign).max(0) as usize;
        }
        for d in &s.declarations {
            bump(&mut self.decl_by_sig, (d.simple_name.clone(), d.arity), sign);
            bump(&mut self.decl_by_name, d.simple_name.clone(), sign);
        }
        for c in &s.invocations {
            bump(&mut self.call_by_sig, (c.simple_name.clone(), c.arg_count), sign);
            bump(&mut self.call_by_name, c.simple_name.clone(), sign);
        }
        if sign < 0 {
            self.decl_by_sig.retain(|_, c| *c > 0);
            self.decl_by_name.retain(|_, c| *c > 0);
            self.call_by_sig.retain(|_, c| *c > 0);
            self.call_by_name.retain(|_, c| *c > 0);
        }
    }
}

/// Builds snapshot indices from a repository's object store, sharing a
/// parse cache across snapshots.
pub struct SnapshotBuilder<'r> {
    repo: &'r GitRepo,
    cache: Arc<ParseCache>,
    max_file_bytes: u64,
}

impl<'r> SnapshotBuilder<'r> {
    pub fn new(repo: &'r GitRepo, cache: Arc<ParseCache>) -> Self {
        SnapshotBuilder { repo, cache, max_file_bytes: DEFAULT_MAX_FILE_BYTES }
    }

    pub fn with_max_file_bytes(mut self, max: u64) -> Self {
        self.max_file_bytes = max;
        self
    }

    /// Parses every `.java` blob of `sha`'s tree (through the cache).
    pub fn full(&self, sha: &str) -> Result<SnapshotIndex, HistoryError> {
        let sha = self.repo.resolve_commit(sha)?;
        let entries = self.repo.java_tree(&sha)?;
        let mut snap = SnapshotIndex { sha, ..SnapshotIndex::default() };
        for entry in entries {
            if entry.size > self.max_file_bytes {
                info!("skipping {} ({} bytes)", entry.path, entry.size);
                snap.skipped_large.push(entry.path);
                continue;
            }
            let surface = self.cache.get_or_parse(self.repo, &entry)?;
            snap.add_counts(&surface, 1);
            snap.files.insert(entry.path, FileEntry { blob: entry.blob, surface });
        }
        Ok(snap)
    }

    /// Derives the snapshot of `sha` from `prev`, re-parsing only paths
    /// whose blob id changed.
    pub fn advance(&self, prev: &SnapshotIndex, sha: &str) -> Result<SnapshotIndex, HistoryError> {
        let sha = self.repo.resolve_commit(sha)?;
        let entries = self.repo.java_tree(&sha)?;
        let mut snap = prev.clone();
        snap.sha = sha;
        snap.skipped_large.clear();

        let mut next_paths = std::collections::BTreeSet::new();
        for entry in entries {
            if entry.size > self.max_file_bytes {
                snap.skipped_large.push(entry.path.clone());
                continue;
            }
            next_paths.insert(entry.path.clone());
            let unchanged = prev.files.get(&entry.path).is_some_and(|f| f.blob == entry.blob);
            if unchanged {
                continue;
            }
            if let Some(old) = snap.files.remove(&entry.path) {
                snap.add_counts(&old.surface, -1);
            }
            let surface = self.cache.get_or_parse(self.repo, &entry)?;
            snap.add_counts(&surface, 1);
            snap.files.insert(entry.path, FileEntry { blob: entry.blob, surface });
        }
        let removed: Vec<String> = snap.files.keys().filter(|p| !next_paths.contains(*p)).cloned().collect();
        for path in removed {
            if let Some(old) = snap.files.remove(&path) {
                snap.add_counts(&old.surface, -1);
            }
        }
        Ok(snap)
    }
}
