//! C ABI over the reuse-miner pipeline.
//!
//! Every fallible call returns an [`RmStatus`]. On failure the message is
//! kept per thread and can be read with [`rm_last_error`]. Strings handed
//! out by this library must be released with [`rm_string_free`]; handles
//! with their matching `*_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;

use reuse_miner::clustering::cluster_by_rhs;
use reuse_miner::history::{GitRepo, HistoryError};
use reuse_miner::io::to_jsonl;
use reuse_miner::library::{index_library, ApiIndex, LibraryCoordinate, LibraryError};
use reuse_miner::parser;
use reuse_miner::pipeline::{analyze_repo, AnalyzeOptions, RepoAnalysis};
use reuse_miner::selector::{select, SelectorConfig};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RmStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    InvalidArgument = 3,
    Io = 4,
    Library = 5,
    NotARepository = 6,
    Git = 7,
    Internal = 8,
}

/// Loaded API index.
pub struct RmIndex {
    inner: ApiIndex,
}

/// Result of analysing one repository.
pub struct RmAnalysis {
    inner: RepoAnalysis,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

struct Failure(RmStatus, String);

impl From<LibraryError> for Failure {
    fn from(e: LibraryError) -> Self {
        match e {
            LibraryError::Io(_) => Failure(RmStatus::Io, e.to_string()),
            LibraryError::InvalidCoordinate(_) => Failure(RmStatus::InvalidArgument, e.to_string()),
            _ => Failure(RmStatus::Library, e.to_string()),
        }
    }
}

impl From<HistoryError> for Failure {
    fn from(e: HistoryError) -> Self {
        match e {
            HistoryError::NotARepository(_) => Failure(RmStatus::NotARepository, e.to_string()),
            HistoryError::Io(_) => Failure(RmStatus::Io, e.to_string()),
            _ => Failure(RmStatus::Git, e.to_string()),
        }
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> RmStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            RmStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            RmStatus::Internal
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(RmStatus::NullArgument, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(RmStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

unsafe fn ref_arg<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| Failure(RmStatus::NullArgument, format!("{what} is null")))
}

unsafe fn put<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure(RmStatus::NullArgument, format!("{what} is null")));
    }
    out.write(value);
    Ok(())
}

fn c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("no interior nul").into_raw()
}

/// Message of the last failed call on this thread, or null. Owned by the
/// library and valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn rm_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(std::ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn rm_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must be null or a string returned by this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn rm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Loads an index written by `reuse-miner mine-libs` (the `index/` directory).
///
/// # Safety
/// `dir` must be a nul-terminated string, `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn rm_index_load(dir: *const c_char, out: *mut *mut RmIndex) -> RmStatus {
    guard(|| {
        let dir = str_arg(dir, "dir")?;
        let inner = ApiIndex::load_from_dir(&PathBuf::from(dir))?;
        put(out, Box::into_raw(Box::new(RmIndex { inner })), "out")
    })
}

/// Indexes an unpacked source tree as the library `group:artifact:version`.
///
/// # Safety
/// String arguments must be nul-terminated, `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn rm_index_from_source_tree(
    source_dir: *const c_char,
    coordinate: *const c_char,
    out: *mut *mut RmIndex,
) -> RmStatus {
    guard(|| {
        let dir = str_arg(source_dir, "source_dir")?;
        let coord: LibraryCoordinate = str_arg(coordinate, "coordinate")?.parse()?;
        let (apis, packages) = index_library(&PathBuf::from(dir), &coord)?;
        let packages = packages
            .into_iter()
            .map(|p| (p, [coord.clone()].into_iter().collect()))
            .collect();
        let inner = ApiIndex::new(apis, packages);
        put(out, Box::into_raw(Box::new(RmIndex { inner })), "out")
    })
}

/// # Safety
/// `index` must be null or a handle from this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn rm_index_free(index: *mut RmIndex) {
    if !index.is_null() {
        drop(Box::from_raw(index));
    }
}

/// Number of public API methods in the index, or 0 for a null handle.
///
/// # Safety
/// `index` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rm_index_api_count(index: *const RmIndex) -> usize {
    index.as_ref().map_or(0, |i| i.inner.apis().len())
}

/// JSON array of the API records with the given simple name.
///
/// # Safety
/// `index` must be a live handle, `name` nul-terminated, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn rm_index_lookup_json(index: *const RmIndex, name: *const c_char, out: *mut *mut c_char) -> RmStatus {
    guard(|| {
        let index = ref_arg(index, "index")?;
        let name = str_arg(name, "name")?;
        let hits: Vec<_> = index.inner.by_name(name).collect();
        let json = serde_json::to_string(&hits).expect("serializable");
        put(out, c_string(json), "out")
    })
}

/// Parses one Java compilation unit and returns its surface as JSON.
///
/// # Safety
/// `source` and `path` must be nul-terminated, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn rm_parse_java_json(source: *const c_char, path: *const c_char, out: *mut *mut c_char) -> RmStatus {
    guard(|| {
        let source = str_arg(source, "source")?;
        let path = str_arg(path, "path")?;
        let surface = parser::parse_file(source, path);
        put(out, c_string(serde_json::to_string(&surface).expect("serializable")), "out")
    })
}

/// Walks the first-parent history of the git repository at `repo_path`.
/// `branch` may be null for the current HEAD.
///
/// # Safety
/// `index` must be a live handle; strings nul-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn rm_analyze_repo(
    index: *const RmIndex,
    repo_path: *const c_char,
    repo_id: *const c_char,
    branch: *const c_char,
    out: *mut *mut RmAnalysis,
) -> RmStatus {
    guard(|| {
        let index = ref_arg(index, "index")?;
        let path = str_arg(repo_path, "repo_path")?;
        let id = str_arg(repo_id, "repo_id")?;
        let branch = if branch.is_null() { None } else { Some(str_arg(branch, "branch")?.to_string()) };
        let repo = GitRepo::open(&PathBuf::from(path))?;
        let opts = AnalyzeOptions { branch, ..AnalyzeOptions::default() };
        let inner = analyze_repo(&repo, id, &index.inner, &opts)?;
        put(out, Box::into_raw(Box::new(RmAnalysis { inner })), "out")
    })
}

/// # Safety
/// `analysis` must be null or a handle from this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn rm_analysis_free(analysis: *mut RmAnalysis) {
    if !analysis.is_null() {
        drop(Box::from_raw(analysis));
    }
}

/// # Safety
/// `analysis` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rm_analysis_commit_count(analysis: *const RmAnalysis) -> usize {
    analysis.as_ref().map_or(0, |a| a.inner.steps)
}

/// # Safety
/// `analysis` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rm_analysis_candidate_count(analysis: *const RmAnalysis) -> usize {
    analysis.as_ref().map_or(0, |a| a.inner.candidates.len())
}

/// Candidates as JSON lines. With `min_replacements` > 0 only the candidates
/// the selector keeps at that threshold are returned.
///
/// # Safety
/// `analysis` must be a live handle, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn rm_analysis_candidates_jsonl(
    analysis: *const RmAnalysis,
    min_replacements: usize,
    drop_trivial: bool,
    out: *mut *mut c_char,
) -> RmStatus {
    guard(|| {
        let a = ref_arg(analysis, "analysis")?;
        let text = if min_replacements == 0 {
            to_jsonl(&a.inner.candidates)
        } else {
            let cfg = SelectorConfig::new(min_replacements, drop_trivial)
                .map_err(|e| Failure(RmStatus::InvalidArgument, e.to_string()))?;
            to_jsonl(&select(&a.inner.candidates, &cfg))
        };
        put(out, c_string(text), "out")
    })
}

/// Clusters the analysis candidates into replacement rules, as JSON lines.
///
/// # Safety
/// `analysis` must be a live handle, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn rm_analysis_rules_jsonl(analysis: *const RmAnalysis, out: *mut *mut c_char) -> RmStatus {
    guard(|| {
        let a = ref_arg(analysis, "analysis")?;
        put(out, c_string(to_jsonl(&cluster_by_rhs(&a.inner.candidates))), "out")
    })
}
