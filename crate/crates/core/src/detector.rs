//! Candidate `m → API` replacements of one commit step.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::history::{ChangeKind, CommitStep, ReplacedCallPair, SnapshotIndex};
use crate::library::{ApiIndex, LibraryCoordinate};
use crate::parser::{self, ImportStatement, MethodDeclaration};

pub const CANDIDATE_SCHEMA: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateReplacement {
    pub schema: u32,
    pub repo_id: String,
    pub sha: String,
    pub custom_method: MethodDeclaration,
    pub api_simple_name: String,
    pub api_arity: usize,
    pub api_receiver_text: String,
    pub candidate_libraries: BTreeSet<LibraryCoordinate>,
    pub file_paths: BTreeSet<String>,
    pub replacement_count: usize,
    pub commit_message: String,
}

impl CandidateReplacement {
    /// `name/arity` of the custom method.
    pub fn method_signature(&self) -> String {
        format!("{}/{}", self.custom_method.simple_name, self.custom_method.arity)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    /// m declared in the parent snapshot.
    Declared,
    /// m has a body that does not call the API name.
    NotWrapper,
    /// API invoked in the commit snapshot.
    ApiInvoked,
    /// m neither declared nor invoked in the commit snapshot.
    Removed,
    /// API not declared in the commit snapshot.
    External,
    /// An added import resolves to an indexed package.
    Import,
}

impl Condition {
    pub const ALL: [Condition; 6] = [
        Condition::Declared,
        Condition::NotWrapper,
        Condition::ApiInvoked,
        Condition::Removed,
        Condition::External,
        Condition::Import,
    ];

    /// Conventional label: `(1)` .. `(5)` and `import`.
    pub fn label(self) -> &'static str {
        match self {
            Condition::Declared => "(1)",
            Condition::NotWrapper => "(2)",
            Condition::ApiInvoked => "(3)",
            Condition::Removed => "(4)",
            Condition::External => "(5)",
            Condition::Import => "import",
        }
    }

    pub fn from_label(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.label() == s)
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionTrace {
    pub m_name: String,
    pub m_arity: usize,
    pub api_name: String,
    pub results: Vec<(Condition, Outcome)>,
    /// Pairs credited to this group when it was emitted.
    pub attributed_pairs: usize,
}

impl ConditionTrace {
    pub fn passed(&self) -> bool {
        self.results.iter().all(|(_, o)| *o == Outcome::Pass)
    }

    pub fn first_failure(&self) -> Option<Condition> {
        self.results.iter().find(|(_, o)| *o == Outcome::Fail).map(|(c, _)| *c)
    }

    pub fn outcome(&self, c: Condition) -> Outcome {
        self.results.iter().find(|(k, _)| *k == c).map_or(Outcome::Skipped, |(_, o)| *o)
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum DetectError {
    #[error("no ({m}, {api}) pair was observed in commit {sha}")]
    UnknownPair { sha: String, m: String, api: String },
}

/// Funnel counters: how many groups were seen and where they dropped out.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DetectStats {
    pub pairs: usize,
    pub groups: usize,
    pub failed: BTreeMap<Condition, usize>,
    pub emitted: usize,
}

impl DetectStats {
    pub fn merge(&mut self, other: &DetectStats) {
        self.pairs += other.pairs;
        self.groups += other.groups;
        for (c, n) in &other.failed {
            *self.failed.entry(*c).or_default() += n;
        }
        self.emitted += other.emitted;
    }
}

#[derive(Debug, Clone, Default)]
pub struct Detection {
    pub sha: String,
    pub candidates: Vec<CandidateReplacement>,
    pub traces: Vec<ConditionTrace>,
    pub stats: DetectStats,
}

impl Detection {
    /// Condition record for (m, API). `m` is a simple name, optionally
    /// suffixed with `/arity`.
    pub fn resolve_condition_trace(&self, m: &str, api: &str) -> Result<&ConditionTrace, DetectError> {
        let (name, arity) = match m.rsplit_once('/') {
            Some((n, a)) => (n, a.parse::<usize>().ok()),
            None => (m, None),
        };
        self.traces
            .iter()
            .find(|t| t.m_name == name && t.api_name == api && arity.is_none_or(|a| a == t.m_arity))
            .ok_or_else(|| DetectError::UnknownPair { sha: self.sha.clone(), m: m.to_string(), api: api.to_string() })
    }
}

type GroupKey = (String, usize, String);

struct Event {
    key: GroupKey,
    api_arity: usize,
    api_receiver: String,
}

#[derive(Default)]
struct Group {
    pair_ids: Vec<usize>,
    files: BTreeSet<String>,
    api_arity: usize,
    api_receiver: String,
}

/// Applies the replacement conditions to the pairs of one commit step.
///
/// `before` and `after` are the snapshots of the step's parent and commit.
/// Each pair is credited to at most one emitted candidate: the first
/// passing (m, API) combination in fragment order.
pub fn detect(
    step: &CommitStep,
    before: &SnapshotIndex,
    after: &SnapshotIndex,
    pairs: &[ReplacedCallPair],
    index: &ApiIndex,
) -> Detection {
    let mut per_pair: Vec<Vec<Event>> = Vec::with_capacity(pairs.len());
    for pair in pairs {
        let olds = parser::outermost_calls(&pair.old_fragment);
        let news = parser::parse_fragment(&pair.new_fragment);
        let mut events: Vec<Event> = Vec::new();
        for o in &olds {
            let m_arity = if o.truncated {
                lower_bound_arity(before, &o.simple_name, o.arg_count)
            } else {
                o.arg_count
            };
            for n in &news {
                if o.simple_name == n.simple_name {
                    continue;
                }
                let key = (o.simple_name.clone(), m_arity, n.simple_name.clone());
                if events.iter().any(|e| e.key == key) {
                    continue;
                }
                events.push(Event { key, api_arity: n.arg_count, api_receiver: n.receiver_text.clone() });
            }
        }
        per_pair.push(events);
    }

    let mut groups: BTreeMap<GroupKey, Group> = BTreeMap::new();
    for (pid, events) in per_pair.iter().enumerate() {
        for e in events {
            let g = groups.entry(e.key.clone()).or_insert_with(|| Group {
                api_arity: e.api_arity,
                api_receiver: e.api_receiver.clone(),
                ..Group::default()
            });
            g.pair_ids.push(pid);
            g.files.insert(pairs[pid].file_path.clone());
        }
    }

    let old_paths = old_path_map(step);
    let mut stats = DetectStats { pairs: pairs.len(), groups: groups.len(), ..DetectStats::default() };
    let mut traces = BTreeMap::new();
    let mut passing: BTreeMap<GroupKey, (MethodDeclaration, BTreeSet<LibraryCoordinate>)> = BTreeMap::new();
    for (key, g) in &groups {
        let (trace, hit) = evaluate(key, g, before, after, index, &old_paths);
        match trace.first_failure() {
            Some(c) => *stats.failed.entry(c).or_default() += 1,
            None => {
                if let Some(hit) = hit {
                    passing.insert(key.clone(), hit);
                }
            }
        }
        traces.insert(key.clone(), trace);
    }

    let mut credited: BTreeMap<GroupKey, Vec<usize>> = BTreeMap::new();
    for (pid, events) in per_pair.iter().enumerate() {
        if let Some(e) = events.iter().find(|e| passing.contains_key(&e.key)) {
            credited.entry(e.key.clone()).or_default().push(pid);
        }
    }

    let mut candidates = Vec::new();
    for (key, (decl, libs)) in passing {
        let Some(pids) = credited.get(&key) else { continue };
        let g = &groups[&key];
        let file_paths: BTreeSet<String> = pids.iter().map(|&p| pairs[p].file_path.clone()).collect();
        if let Some(t) = traces.get_mut(&key) {
            t.attributed_pairs = pids.len();
        }
        candidates.push(CandidateReplacement {
            schema: CANDIDATE_SCHEMA,
            repo_id: step.repo_id.clone(),
            sha: step.sha.clone(),
            custom_method: decl,
            api_simple_name: key.2.clone(),
            api_arity: g.api_arity,
            api_receiver_text: g.api_receiver.clone(),
            candidate_libraries: libs,
            file_paths,
            replacement_count: pids.len(),
            commit_message: step.message.clone(),
        });
    }
    stats.emitted = candidates.len();
    Detection { sha: step.sha.clone(), candidates, traces: traces.into_values().collect(), stats }
}

/// Smallest declared arity of `name` that is at least `seen`, for calls
/// whose argument list was cut off by the diff.
fn lower_bound_arity(before: &SnapshotIndex, name: &str, seen: usize) -> usize {
    before
        .declarations()
        .filter(|d| d.simple_name == name && d.arity >= seen)
        .map(|d| d.arity)
        .min()
        .unwrap_or(seen)
}

fn old_path_map(step: &CommitStep) -> BTreeMap<&str, &str> {
    step.changed_java_files
        .iter()
        .filter_map(|f| match &f.change {
            ChangeKind::Renamed { old_path } => Some((f.path.as_str(), old_path.as_str())),
            _ => None,
        })
        .collect()
}

fn calls_name(body: &str, name: &str) -> bool {
    parser::parse_fragment(body).iter().any(|c| c.simple_name == name)
}

type Hit = (MethodDeclaration, BTreeSet<LibraryCoordinate>);

fn evaluate(
    key: &GroupKey,
    group: &Group,
    before: &SnapshotIndex,
    after: &SnapshotIndex,
    index: &ApiIndex,
    old_paths: &BTreeMap<&str, &str>,
) -> (ConditionTrace, Option<Hit>) {
    let (m, arity, api) = (key.0.as_str(), key.1, key.2.as_str());
    let mut results = Vec::with_capacity(Condition::ALL.len());
    let mut failed = false;
    let mut record = |c: Condition, ok: &mut dyn FnMut() -> bool| {
        let o = if failed {
            Outcome::Skipped
        } else if ok() {
            Outcome::Pass
        } else {
            failed = true;
            Outcome::Fail
        };
        results.push((c, o));
    };

    // Declarations in a file where the replacement happened come first.
    let mut decls: Vec<&MethodDeclaration> = before.find_declarations(m, arity).collect();
    decls.sort_by_key(|d| !group.files.contains(&d.file_path));
    let mut chosen: Option<MethodDeclaration> = None;
    let mut libs = BTreeSet::new();

    record(Condition::Declared, &mut || !decls.is_empty());
    record(Condition::NotWrapper, &mut || {
        chosen = decls
            .iter()
            .find(|d| d.has_body() && !calls_name(&d.body_text, api))
            .map(|d| (*d).clone());
        chosen.is_some()
    });
    record(Condition::ApiInvoked, &mut || after.has_invocation_named(api));
    record(Condition::Removed, &mut || !after.has_declaration(m, arity) && !after.has_invocation_named(m));
    record(Condition::External, &mut || !after.has_declaration_named(api));
    record(Condition::Import, &mut || {
        libs = added_import_libraries(group, before, after, index, old_paths);
        !libs.is_empty()
    });

    let trace = ConditionTrace {
        m_name: m.to_string(),
        m_arity: arity,
        api_name: api.to_string(),
        results,
        attributed_pairs: 0,
    };
    let hit = if trace.passed() { chosen.map(|d| (d, libs)) } else { None };
    (trace, hit)
}

fn added_import_libraries(
    group: &Group,
    before: &SnapshotIndex,
    after: &SnapshotIndex,
    index: &ApiIndex,
    old_paths: &BTreeMap<&str, &str>,
) -> BTreeSet<LibraryCoordinate> {
    let key = |i: &ImportStatement| (i.imported_path.clone(), i.is_static, i.is_wildcard);
    let mut libs = BTreeSet::new();
    for path in &group.files {
        let old_path = old_paths.get(path.as_str()).copied().unwrap_or(path);
        let old: BTreeSet<_> = before.imports_of(old_path).iter().map(key).collect();
        for imp in after.imports_of(path) {
            if old.contains(&key(imp)) {
                continue;
            }
            for pkg in imp.package_candidates() {
                if let Some(coords) = index.libraries_for_package(pkg) {
                    libs.extend(coords.iter().cloned());
                    break;
                }
            }
        }
    }
    libs
}
