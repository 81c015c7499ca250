use std::cmp::Ordering;
use std::io::Read;
use std::path::{Path, PathBuf};

use quick_xml::events::Event;
use quick_xml::Reader;

use super::{LibraryCoordinate, LibraryError};

pub const DEFAULT_REPOSITORY: &str = "https://repo1.maven.org/maven2";
pub const REPOSITORY_ENV: &str = "REUSE_MINER_REPOSITORY_URL";

const COMPLETE_MARKER: &str = ".reuse-miner-complete";

/// A Maven-layout artifact repository reachable over HTTP(S) or `file://`.
#[derive(Debug, Clone)]
pub struct Repository {
    base: String,
    agent: ureq::Agent,
}

impl Default for Repository {
    fn default() -> Self {
        Repository::new(DEFAULT_REPOSITORY)
    }
}

impl Repository {
    pub fn new(base: &str) -> Self {
        let agent = ureq::AgentBuilder::new()
            .timeout_connect(std::time::Duration::from_secs(20))
            .timeout_read(std::time::Duration::from_secs(120))
            .build();
        Repository { base: base.trim_end_matches('/').to_string(), agent }
    }

    /// Base URL from `REUSE_MINER_REPOSITORY_URL`, falling back to Maven Central.
    pub fn from_env() -> Self {
        match std::env::var(REPOSITORY_ENV) {
            Ok(url) if !url.trim().is_empty() => Repository::new(url.trim()),
            _ => Repository::default(),
        }
    }

    pub fn base(&self) -> &str {
        &self.base
    }

    pub fn metadata_url(&self, group_id: &str, artifact_id: &str) -> String {
        format!("{}/{}/{}/maven-metadata.xml", self.base, group_id.replace('.', "/"), artifact_id)
    }

    pub fn sources_url(&self, coord: &LibraryCoordinate) -> String {
        format!(
            "{}/{}/{}/{}/{}-{}-sources.jar",
            self.base,
            coord.group_id.replace('.', "/"),
            coord.artifact_id,
            coord.version,
            coord.artifact_id,
            coord.version
        )
    }

    fn get(&self, url: &str) -> Result<Vec<u8>, LibraryError> {
        if let Some(path) = url.strip_prefix("file://") {
            return std::fs::read(path).map_err(|e| match e.kind() {
                std::io::ErrorKind::NotFound => LibraryError::NotFound(url.to_string()),
                _ => LibraryError::Network { url: url.to_string(), message: e.to_string() },
            });
        }
        match self.agent.get(url).call() {
            Ok(resp) => {
                let mut buf = Vec::new();
                resp.into_reader()
                    .read_to_end(&mut buf)
                    .map_err(|e| LibraryError::Network { url: url.to_string(), message: e.to_string() })?;
                Ok(buf)
            }
            Err(ureq::Error::Status(404 | 410, _)) => Err(LibraryError::NotFound(url.to_string())),
            Err(e) => Err(LibraryError::Network { url: url.to_string(), message: e.to_string() }),
        }
    }

    pub fn resolve_latest_version(&self, group_id: &str, artifact_id: &str) -> Result<LibraryCoordinate, LibraryError> {
        let body = self.get(&self.metadata_url(group_id, artifact_id))?;
        let text = String::from_utf8_lossy(&body);
        let version = latest_from_metadata(&text)?;
        LibraryCoordinate::new(group_id, artifact_id, &version)
    }

    /// Directory holding the unpacked sources of `coord`, downloading and
    /// unpacking the `-sources.jar` on a cache miss.
    pub fn fetch_library_sources(&self, coord: &LibraryCoordinate, cache_dir: &Path) -> Result<PathBuf, LibraryError> {
        let target = cache_dir
            .join(&coord.group_id)
            .join(&coord.artifact_id)
            .join(&coord.version)
            .join("src");
        if target.join(COMPLETE_MARKER).is_file() {
            return Ok(target);
        }
        let url = self.sources_url(coord);
        let bytes = self.get(&url)?;
        let staging = target.with_file_name(format!("src.partial-{}", std::process::id()));
        if staging.exists() {
            std::fs::remove_dir_all(&staging)?;
        }
        std::fs::create_dir_all(&staging)?;
        if let Err(e) = unpack_jar(&bytes, &staging) {
            let _ = std::fs::remove_dir_all(&staging);
            return Err(LibraryError::ArchiveCorrupt(url, e));
        }
        std::fs::write(staging.join(COMPLETE_MARKER), coord.to_string())?;
        if target.exists() {
            std::fs::remove_dir_all(&target)?;
        }
        std::fs::rename(&staging, &target)?;
        Ok(target)
    }
}

fn unpack_jar(bytes: &[u8], dest: &Path) -> Result<(), String> {
    let mut archive = zip::ZipArchive::new(std::io::Cursor::new(bytes)).map_err(|e| e.to_string())?;
    for i in 0..archive.len() {
        let mut entry = archive.by_index(i).map_err(|e| e.to_string())?;
        // entries escaping the destination are ignored
        let Some(rel) = entry.enclosed_name() else { continue };
        let out = dest.join(rel);
        if entry.is_dir() {
            std::fs::create_dir_all(&out).map_err(|e| e.to_string())?;
            continue;
        }
        if let Some(parent) = out.parent() {
            std::fs::create_dir_all(parent).map_err(|e| e.to_string())?;
        }
        let mut data = Vec::with_capacity(entry.size() as usize);
        entry.read_to_end(&mut data).map_err(|e| e.to_string())?;
        std::fs::write(&out, data).map_err(|e| e.to_string())?;
    }
    Ok(())
}

/// The `<release>` version of a `maven-metadata.xml` document, or the
/// greatest listed `<version>` when no release is designated.
pub fn latest_from_metadata(xml: &str) -> Result<String, LibraryError> {
    let mut reader = Reader::from_str(xml);
    let mut path: Vec<String> = Vec::new();
    let mut release = None;
    let mut versions = Vec::new();
    let mut saw_metadata = false;
    loop {
        match reader.read_event() {
            Ok(Event::Start(e)) => {
                let name = String::from_utf8_lossy(e.local_name().as_ref()).into_owned();
                if name == "metadata" {
                    saw_metadata = true;
                }
                path.push(name);
            }
            Ok(Event::End(_)) => {
                path.pop();
            }
            Ok(Event::Text(t)) => {
                let text = t
                    .unescape()
                    .map_err(|e| LibraryError::MetadataParse(e.to_string()))?
                    .trim()
                    .to_string();
                if text.is_empty() {
                    continue;
                }
                match path.last().map(String::as_str) {
                    Some("release") => release = Some(text),
                    Some("version") if path.iter().any(|p| p == "versions") => versions.push(text),
                    _ => {}
                }
            }
            Ok(Event::Eof) => break,
            Ok(_) => {}
            Err(e) => return Err(LibraryError::MetadataParse(e.to_string())),
        }
    }
    if !saw_metadata {
        return Err(LibraryError::MetadataParse("missing <metadata> root".into()));
    }
    if let Some(r) = release {
        return Ok(r);
    }
    versions
        .into_iter()
        .max_by(|a, b| compare_versions(a, b))
        .ok_or_else(|| LibraryError::NotFound("metadata lists no versions".into()))
}

/// Component-wise ordering: components split on `.` and `-`, compared
/// numerically when both are numbers and lexicographically otherwise. A
/// version that is a strict prefix of another sorts first.
pub fn compare_versions(a: &str, b: &str) -> Ordering {
    let split = |s: &str| s.split(['.', '-']).map(str::to_string).collect::<Vec<_>>();
    let (xa, xb) = (split(a), split(b));
    for (ca, cb) in xa.iter().zip(&xb) {
        let ord = match (ca.parse::<u64>(), cb.parse::<u64>()) {
            (Ok(na), Ok(nb)) => na.cmp(&nb),
            _ => ca.cmp(cb),
        };
        if ord != Ordering::Equal {
            return ord;
        }
    }
    xa.len().cmp(&xb.len())
}
