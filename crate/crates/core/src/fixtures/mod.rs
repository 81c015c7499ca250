//! Synthetic git repositories with injected `m → API` replacements and
//! noise whose expected detector outcome is known by construction.

pub mod catalog;
pub mod library;

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::Command;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::detector::Condition;
use crate::history::git_binary;
use catalog::Template;

pub const MANIFEST_FILE: &str = "manifest.json";
pub const REPO_LIST_FILE: &str = "repos.txt";
pub const LIB_DIR: &str = "libs";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NoiseKind {
    /// m already calls the API.
    Wrapper,
    /// The file declaring m moves; m survives.
    RenameOnly,
    /// Call-site files are re-indented in the same commit.
    FormattingChange,
    /// One call site keeps calling m.
    PartialReplacement,
    /// A client class declares a method named like the API.
    ApiAlsoDeclaredLocally,
    /// The API is called fully qualified, so no import is added.
    MissingImport,
    /// The replaced method belongs to an unindexed dependency, not the repo.
    ExternalOldCall,
    /// The "replacement" only happens inside comments.
    CommentedCall,
}

impl NoiseKind {
    pub const ALL: [NoiseKind; 8] = [
        NoiseKind::Wrapper,
        NoiseKind::RenameOnly,
        NoiseKind::FormattingChange,
        NoiseKind::PartialReplacement,
        NoiseKind::ApiAlsoDeclaredLocally,
        NoiseKind::MissingImport,
        NoiseKind::ExternalOldCall,
        NoiseKind::CommentedCall,
    ];

    /// The detector condition this noise makes fail, if any.
    pub fn trips(self) -> Option<Condition> {
        match self {
            NoiseKind::Wrapper => Some(Condition::NotWrapper),
            NoiseKind::RenameOnly | NoiseKind::PartialReplacement => Some(Condition::Removed),
            NoiseKind::FormattingChange => None,
            NoiseKind::ApiAlsoDeclaredLocally => Some(Condition::External),
            NoiseKind::MissingImport => Some(Condition::Import),
            NoiseKind::ExternalOldCall => Some(Condition::Declared),
            NoiseKind::CommentedCall => Some(Condition::ApiInvoked),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InjectionSpec {
    /// Name of a [`catalog::TEMPLATES`] entry; also the custom method's name.
    pub template: String,
    pub call_sites: usize,
    pub api_name: String,
    pub library: String,
    pub noise: Vec<NoiseKind>,
}

impl InjectionSpec {
    pub fn new(template: &str, call_sites: usize, noise: &[NoiseKind]) -> Result<Self, FixtureError> {
        let t = catalog::template(template).ok_or_else(|| FixtureError::InvalidSpec(format!("unknown template {template}")))?;
        if call_sites == 0 {
            return Err(FixtureError::InvalidSpec(format!("{template}: call-site count must be at least 1")));
        }
        let mut noise = noise.to_vec();
        noise.sort();
        noise.dedup();
        Ok(InjectionSpec {
            template: template.to_string(),
            call_sites,
            api_name: t.api_name.to_string(),
            library: t.library.to_string(),
            noise,
        })
    }

    pub fn expected_failure(&self) -> Option<Condition> {
        self.noise.iter().filter_map(|n| n.trips()).min()
    }

    fn has(&self, n: NoiseKind) -> bool {
        self.noise.contains(&n)
    }

    fn template(&self) -> Result<&'static Template, FixtureError> {
        catalog::template(&self.template).ok_or_else(|| FixtureError::InvalidSpec(format!("unknown template {}", self.template)))
    }
}

#[derive(Debug, thiserror::Error)]
pub enum FixtureError {
    #[error("git executable unavailable: {0}")]
    GitUnavailable(String),
    #[error("git {args} failed: {message}")]
    Git { args: String, message: String },
    #[error("invalid injection spec: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub repo_id: String,
    pub sha: String,
    pub method_name: String,
    pub method_arity: usize,
    pub api_name: String,
    pub api_class: String,
    pub library: String,
    pub call_sites: usize,
    pub noise: Vec<NoiseKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub replacement_count: Option<usize>,
    /// Label of the condition expected to fail.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestRepo {
    pub repo_id: String,
    /// Directory relative to the corpus root.
    pub dir: String,
    pub head: String,
    pub commits: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub seed: u64,
    pub repos: Vec<ManifestRepo>,
    pub must_detect: Vec<ManifestEntry>,
    pub must_not_detect: Vec<ManifestEntry>,
}

impl Manifest {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable") + "\n"
    }

    fn extend(&mut self, other: Manifest) {
        self.repos.extend(other.repos);
        self.must_detect.extend(other.must_detect);
        self.must_not_detect.extend(other.must_not_detect);
    }
}

#[derive(Debug, Clone)]
pub struct Fixture {
    pub path: PathBuf,
    pub repo_id: String,
    pub manifest: Manifest,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct FixtureOptions {
    /// Pad the history with noise commits up to this many commits.
    pub min_commits: usize,
}

/// Builds one repository at `dest` (which must not exist or be empty).
/// The repository id is `fixture/<dir name>`.
pub fn build_fixture(specs: &[InjectionSpec], seed: u64, dest: &Path) -> Result<Fixture, FixtureError> {
    build_fixture_with(specs, seed, dest, FixtureOptions::default())
}

pub fn build_fixture_with(specs: &[InjectionSpec], seed: u64, dest: &Path, opts: FixtureOptions) -> Result<Fixture, FixtureError> {
    let dir_name = dest
        .file_name()
        .and_then(|n| n.to_str())
        .ok_or_else(|| FixtureError::InvalidSpec(format!("bad destination {}", dest.display())))?
        .to_string();
    let repo_id = format!("fixture/{dir_name}");
    validate(specs)?;
    let mut b = Builder::new(dest, &repo_id, &dir_name, specs, seed)?;
    b.run(opts)?;
    let manifest = Manifest {
        seed,
        repos: vec![ManifestRepo { repo_id: repo_id.clone(), dir: dir_name, head: b.head.clone(), commits: b.commits }],
        must_detect: b.must_detect,
        must_not_detect: b.must_not_detect,
    };
    Ok(Fixture { path: dest.to_path_buf(), repo_id, manifest })
}

#[derive(Debug, Clone)]
pub struct Corpus {
    pub root: PathBuf,
    pub manifest: Manifest,
    pub repo_list: PathBuf,
    pub lib_dir: PathBuf,
}

/// Builds `repo-<i>` for each spec list under `root`, plus the library
/// sources (`libs/`), `repos.txt` and `manifest.json`.
pub fn build_corpus(repos: &[Vec<InjectionSpec>], seed: u64, root: &Path) -> Result<Corpus, FixtureError> {
    std::fs::create_dir_all(root)?;
    let mut manifest = Manifest { seed, ..Manifest::default() };
    let mut list = String::new();
    for (i, specs) in repos.iter().enumerate() {
        let dest = root.join(format!("repo-{i}"));
        let sub_seed = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(i as u64);
        let f = build_fixture(specs, sub_seed, &dest)?;
        list.push_str(&format!("{} {}\n", f.repo_id, dest.display()));
        manifest.extend(f.manifest);
    }
    let lib_dir = root.join(LIB_DIR);
    library::write_library_dirs(&lib_dir)?;
    let repo_list = root.join(REPO_LIST_FILE);
    std::fs::write(&repo_list, list)?;
    std::fs::write(root.join(MANIFEST_FILE), manifest.to_json())?;
    Ok(Corpus { root: root.to_path_buf(), manifest, repo_list, lib_dir })
}

/// A seeded corpus of `repos` repositories covering every noise kind and
/// call-site counts 1 to 5.
pub fn standard_corpus(seed: u64, repos: usize) -> Vec<Vec<InjectionSpec>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let repos = repos.max(1);
    // Each noise kind appears at least once; the rest are clean.
    let mut plan: Vec<Vec<NoiseKind>> = NoiseKind::ALL.iter().map(|n| vec![*n]).collect();
    plan.push(vec![NoiseKind::FormattingChange, NoiseKind::Wrapper]);
    let per_repo = 4;
    while plan.len() < repos * per_repo {
        plan.push(Vec::new());
    }
    plan.shuffle(&mut rng);
    let mut out: Vec<Vec<InjectionSpec>> = vec![Vec::new(); repos];
    for (i, noise) in plan.into_iter().enumerate() {
        let r = i % repos;
        let used: BTreeSet<&str> = out[r].iter().map(|s| s.template.as_str()).collect();
        let choices: Vec<&Template> = catalog::TEMPLATES.iter().filter(|t| !used.contains(t.method)).collect();
        let t = choices.choose(&mut rng).expect("enough templates");
        let k = (i % 5) + 1;
        out[r].push(InjectionSpec::new(t.method, k, &noise).expect("valid"));
    }
    out
}

fn validate(specs: &[InjectionSpec]) -> Result<(), FixtureError> {
    let mut seen = BTreeSet::new();
    for s in specs {
        s.template()?;
        if s.call_sites == 0 {
            return Err(FixtureError::InvalidSpec(format!("{}: call-site count must be at least 1", s.template)));
        }
        if !seen.insert(s.template.as_str()) {
            return Err(FixtureError::InvalidSpec(format!("template {} used twice in one repository", s.template)));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// repository model

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum SiteState {
    Old,
    New,
}

#[derive(Debug, Clone)]
struct Site {
    inj: usize,
    state: SiteState,
}

#[derive(Debug, Clone)]
struct FeatureFile {
    class_name: String,
    imports: Vec<String>,
    sites: Vec<Site>,
    indent: &'static str,
}

#[derive(Debug, Clone)]
struct Filler {
    name: String,
    subdir: String,
    fields: Vec<String>,
    version: u32,
    value_of: bool,
}

struct Injection<'a> {
    spec: &'a InjectionSpec,
    tpl: &'static Template,
    in_helpers: bool,
}

const FIELD_NAMES: &[&str] = &["title", "owner", "status", "region", "notes", "label", "source", "target", "channel", "origin"];
const FILLER_NAMES: &[&str] = &["Order", "Account", "Invoice", "Shipment", "Customer", "Ticket", "Profile", "Payment", "Address", "Session"];
const MESSAGES: &[&str] = &[
    "Refactor model classes",
    "Bump version",
    "Tidy up fields",
    "Add missing accessor",
    "Update docs",
    "Minor cleanup",
    "Rework toString",
    "Move model class",
];

struct Builder<'a> {
    path: PathBuf,
    repo_id: String,
    pkg: String,
    rng: ChaCha8Rng,
    injections: Vec<Injection<'a>>,
    features: Vec<FeatureFile>,
    fillers: Vec<Filler>,
    helpers_subdir: String,
    locals: Vec<(String, String)>,
    readme_rev: u32,
    written: BTreeSet<PathBuf>,
    commits: usize,
    head: String,
    must_detect: Vec<ManifestEntry>,
    must_not_detect: Vec<ManifestEntry>,
}

impl<'a> Builder<'a> {
    fn new(path: &Path, repo_id: &str, dir_name: &str, specs: &'a [InjectionSpec], seed: u64) -> Result<Self, FixtureError> {
        let pkg: String = dir_name.chars().filter(|c| c.is_ascii_alphanumeric()).collect::<String>().to_ascii_lowercase();
        let pkg = if pkg.is_empty() || pkg.starts_with(|c: char| c.is_ascii_digit()) { format!("r{pkg}") } else { pkg };
        let mut injections = Vec::new();
        for s in specs {
            let tpl = s.template()?;
            injections.push(Injection { spec: s, tpl, in_helpers: !s.has(NoiseKind::ExternalOldCall) });
        }
        Ok(Builder {
            path: path.to_path_buf(),
            repo_id: repo_id.to_string(),
            pkg,
            rng: ChaCha8Rng::seed_from_u64(seed),
            injections,
            features: Vec::new(),
            fillers: Vec::new(),
            helpers_subdir: "util".to_string(),
            locals: Vec::new(),
            readme_rev: 0,
            written: BTreeSet::new(),
            commits: 0,
            head: String::new(),
            must_detect: Vec::new(),
            must_not_detect: Vec::new(),
        })
    }

    fn run(&mut self, opts: FixtureOptions) -> Result<(), FixtureError> {
        std::fs::create_dir_all(&self.path)?;
        self.git(&["init", "-q"])?;
        self.git(&["symbolic-ref", "HEAD", "refs/heads/main"])?;
        self.layout_initial();
        self.commit("Initial import")?;

        let mut order: Vec<usize> = (0..self.injections.len()).collect();
        order.shuffle(&mut self.rng);
        for inj in order {
            let noise = self.rng.gen_range(0..=2);
            for _ in 0..noise {
                self.noise_commit()?;
            }
            self.inject(inj)?;
        }
        let trailing = self.rng.gen_range(0..=2);
        for _ in 0..trailing {
            self.noise_commit()?;
        }
        while self.commits < opts.min_commits {
            self.noise_commit()?;
        }
        Ok(())
    }

    fn layout_initial(&mut self) {
        for (i, inj) in self.injections.iter().enumerate() {
            let spec = inj.spec;
            let total = spec.call_sites + usize::from(spec.has(NoiseKind::PartialReplacement));
            let nfiles = self.rng.gen_range(1..=total.min(3));
            let first = self.features.len();
            for f in 0..nfiles {
                let helper_import = if spec.has(NoiseKind::ExternalOldCall) {
                    "org.legacy.util.LegacyUtils".to_string()
                } else {
                    format!("com.example.{}.util.Helpers", self.pkg)
                };
                self.features.push(FeatureFile {
                    class_name: format!("Feature{}{}", i, (b'A' + f as u8) as char),
                    imports: vec![helper_import],
                    sites: Vec::new(),
                    indent: "    ",
                });
            }
            for s in 0..total {
                self.features[first + s % nfiles].sites.push(Site { inj: i, state: SiteState::Old });
            }
        }
        let nfill = self.rng.gen_range(2..=4);
        for _ in 0..nfill {
            self.add_filler();
        }
    }

    fn add_filler(&mut self) {
        let used: BTreeSet<&str> = self.fillers.iter().map(|f| f.name.as_str()).collect();
        let free: Vec<&&str> = FILLER_NAMES.iter().filter(|n| !used.contains(**n)).collect();
        let name = match free.choose(&mut self.rng) {
            Some(n) => n.to_string(),
            None => format!("Entity{}", self.fillers.len()),
        };
        let nfields = self.rng.gen_range(1..=3);
        let fields = FIELD_NAMES.choose_multiple(&mut self.rng, nfields).map(|s| s.to_string()).collect();
        self.fillers.push(Filler { name, subdir: "model".into(), fields, version: 1, value_of: true });
    }

    fn noise_commit(&mut self) -> Result<(), FixtureError> {
        let op = self.rng.gen_range(0..7);
        let n = self.fillers.len();
        match op {
            0 if n > 0 => {
                let i = self.rng.gen_range(0..n);
                let free: Vec<&&str> = FIELD_NAMES.iter().filter(|f| !self.fillers[i].fields.iter().any(|x| x == **f)).collect();
                if let Some(f) = free.choose(&mut self.rng) {
                    let f = f.to_string();
                    self.fillers[i].fields.push(f);
                } else {
                    self.fillers[i].version += 1;
                }
            }
            1 if n > 0 => {
                let i = self.rng.gen_range(0..n);
                self.fillers[i].version += 1;
            }
            2 if n > 0 => {
                let i = self.rng.gen_range(0..n);
                self.fillers[i].value_of = !self.fillers[i].value_of;
            }
            3 => self.add_filler(),
            4 if n > 0 => {
                let i = self.rng.gen_range(0..n);
                let f = &mut self.fillers[i];
                f.subdir = if f.subdir == "model" { "model/v2".into() } else { "model".into() };
            }
            5 if n > 1 => {
                let i = self.rng.gen_range(0..n);
                self.fillers.remove(i);
            }
            _ => self.readme_rev += 1,
        }
        let msg = *MESSAGES.choose(&mut self.rng).expect("non-empty");
        self.commit(msg)
    }

    fn inject(&mut self, i: usize) -> Result<(), FixtureError> {
        let spec = self.injections[i].spec;
        let tpl = self.injections[i].tpl;
        let keep_m = spec.has(NoiseKind::PartialReplacement) || spec.has(NoiseKind::RenameOnly);
        if !keep_m {
            self.injections[i].in_helpers = false;
        }
        let mut remaining = spec.call_sites;
        let import = tpl.api_import();
        for f in &mut self.features {
            let mut touched = false;
            for s in f.sites.iter_mut().filter(|s| s.inj == i) {
                if remaining > 0 {
                    s.state = SiteState::New;
                    remaining -= 1;
                    touched = true;
                }
            }
            if touched {
                if !spec.has(NoiseKind::MissingImport) && !f.imports.contains(&import) {
                    f.imports.push(import.clone());
                }
                if spec.has(NoiseKind::FormattingChange) {
                    f.indent = if f.indent == "    " { "  " } else { "    " };
                }
            }
        }
        if spec.has(NoiseKind::RenameOnly) {
            self.helpers_subdir = format!("{}/legacy", self.helpers_subdir);
        }
        if spec.has(NoiseKind::ApiAlsoDeclaredLocally) {
            self.locals.push((format!("Local{}", tpl.api_class), tpl.api_name.to_string()));
        }
        self.commit(&format!("Use {}.{} instead of {}", tpl.api_class, tpl.api_name, tpl.method))?;

        let entry = ManifestEntry {
            repo_id: self.repo_id.clone(),
            sha: self.head.clone(),
            method_name: tpl.method.to_string(),
            method_arity: tpl.arity(),
            api_name: tpl.api_name.to_string(),
            api_class: tpl.api_class.to_string(),
            library: tpl.library.to_string(),
            call_sites: spec.call_sites,
            noise: spec.noise.clone(),
            replacement_count: None,
            reason: None,
        };
        match spec.expected_failure() {
            None => self.must_detect.push(ManifestEntry { replacement_count: Some(spec.call_sites), ..entry }),
            Some(c) => self.must_not_detect.push(ManifestEntry { reason: Some(c.label().to_string()), ..entry }),
        }
        Ok(())
    }

    // -- rendering

    fn java_root(&self) -> PathBuf {
        PathBuf::from(format!("src/main/java/com/example/{}", self.pkg))
    }

    fn render(&self) -> Vec<(PathBuf, String)> {
        let root = self.java_root();
        let mut files = vec![
            (PathBuf::from("README.md"), format!("# {}\n\nSample service (revision {}).\n", self.repo_id, self.readme_rev)),
            (PathBuf::from("pom.xml"), self.render_pom()),
            (root.join(&self.helpers_subdir).join("Helpers.java"), self.render_helpers()),
        ];
        for f in &self.features {
            files.push((root.join("app").join(format!("{}.java", f.class_name)), self.render_feature(f)));
        }
        for f in &self.fillers {
            files.push((root.join(&f.subdir).join(format!("{}.java", f.name)), self.render_filler(f)));
        }
        for (class, api) in &self.locals {
            let text = format!(
                "package com.example.{}.util;\n\npublic final class {class} {{\n\n    public static Object {api}(Object... args) {{\n        return args.length == 0 ? null : args[0];\n    }}\n}}\n",
                self.pkg
            );
            files.push((root.join("util").join(format!("{class}.java")), text));
        }
        files
    }

    fn render_pom(&self) -> String {
        let libs: BTreeSet<&str> = self.injections.iter().map(|i| i.tpl.library).collect();
        let mut deps = String::new();
        for l in libs {
            let parts: Vec<&str> = l.split(':').collect();
            deps.push_str(&format!(
                "    <dependency>\n      <groupId>{}</groupId>\n      <artifactId>{}</artifactId>\n      <version>{}</version>\n    </dependency>\n",
                parts[0], parts[1], parts[2]
            ));
        }
        format!(
            "<project>\n  <modelVersion>4.0.0</modelVersion>\n  <groupId>com.example</groupId>\n  <artifactId>{}</artifactId>\n  <version>1.0</version>\n  <dependencies>\n{deps}  </dependencies>\n</project>\n",
            self.pkg
        )
    }

    fn render_helpers(&self) -> String {
        let mut imports = BTreeSet::new();
        let mut methods = String::new();
        for inj in self.injections.iter().filter(|i| i.in_helpers) {
            let t = inj.tpl;
            methods.push_str(&format!("\n    public static {} {}({}) {{\n", t.return_type, t.method, t.params));
            if inj.spec.has(NoiseKind::Wrapper) {
                imports.insert(t.api_import());
                methods.push_str(&format!("        {}.{}({});\n", t.api_class, t.api_name, t.param_names().join(", ")));
            }
            for line in t.body {
                methods.push_str(&format!("        {line}\n"));
            }
            methods.push_str("    }\n");
        }
        let mut out = format!("package com.example.{}.util;\n\n", self.pkg);
        for i in &imports {
            out.push_str(&format!("import {i};\n"));
        }
        if !imports.is_empty() {
            out.push('\n');
        }
        out.push_str("public final class Helpers {\n\n    private Helpers() {\n    }\n");
        out.push_str(&methods);
        out.push_str("}\n");
        out
    }

    fn render_feature(&self, f: &FeatureFile) -> String {
        let ind = f.indent;
        let mut out = format!("package com.example.{}.app;\n\n", self.pkg);
        for i in &f.imports {
            out.push_str(&format!("import {i};\n"));
        }
        out.push_str(&format!("\npublic class {} {{\n\n{ind}private final String name = \"{}\";\n", f.class_name, f.class_name.to_lowercase()));
        for (n, site) in f.sites.iter().enumerate() {
            let inj = &self.injections[site.inj];
            let t = inj.tpl;
            let spec = inj.spec;
            let stmt = match site.state {
                SiteState::Old => {
                    let recv = if spec.has(NoiseKind::ExternalOldCall) { "LegacyUtils" } else { "Helpers" };
                    t.old_stmt.replace("{recv}", recv).replace("{m}", t.method)
                }
                SiteState::New => {
                    let recv = if spec.has(NoiseKind::MissingImport) { t.api_import() } else { t.api_class.to_string() };
                    t.new_stmt.replace("{recv}", &recv)
                }
            };
            out.push_str(&format!("\n{ind}public {} call{n}({}) {{\n", t.caller_return, t.caller_params));
            if spec.has(NoiseKind::CommentedCall) {
                out.push_str(&format!("{ind}{ind}// was: {stmt}\n"));
                let fallback = match t.caller_return {
                    "void" => None,
                    "boolean" => Some("false"),
                    "int" => Some("0"),
                    _ => Some("null"),
                };
                if let Some(v) = fallback {
                    out.push_str(&format!("{ind}{ind}return {v};\n"));
                }
            } else {
                out.push_str(&format!("{ind}{ind}{stmt}\n"));
            }
            out.push_str(&format!("{ind}}}\n"));
        }
        out.push_str(&format!("\n{ind}public String name() {{\n{ind}{ind}return name;\n{ind}}}\n}}\n"));
        out
    }

    fn render_filler(&self, f: &Filler) -> String {
        let pkg_suffix = f.subdir.replace('/', ".");
        let mut out = format!("package com.example.{}.{pkg_suffix};\n\nimport java.util.Objects;\n\npublic class {} {{\n\n    private int version = {};\n", self.pkg, f.name, f.version);
        for field in &f.fields {
            out.push_str(&format!("    private String {field};\n"));
        }
        for field in &f.fields {
            let cap = format!("{}{}", field[..1].to_uppercase(), &field[1..]);
            out.push_str(&format!(
                "\n    public String get{cap}() {{\n        return {field};\n    }}\n\n    public void set{cap}(String {field}) {{\n        this.{field} = {field};\n    }}\n"
            ));
        }
        out.push_str(&format!(
            "\n    @Override\n    public int hashCode() {{\n        return Objects.hash(version, {});\n    }}\n",
            f.fields.join(", ")
        ));
        let text = if f.value_of { "String.valueOf(version)" } else { "Integer.toString(version)" };
        out.push_str(&format!("\n    @Override\n    public String toString() {{\n        return \"{}#\" + {text};\n    }}\n}}\n", f.name));
        out
    }

    // -- git

    fn commit(&mut self, message: &str) -> Result<(), FixtureError> {
        let files = self.render();
        let now: BTreeSet<PathBuf> = files.iter().map(|(p, _)| p.clone()).collect();
        for stale in self.written.difference(&now) {
            let p = self.path.join(stale);
            if p.exists() {
                std::fs::remove_file(p)?;
            }
        }
        for (rel, text) in &files {
            let p = self.path.join(rel);
            if let Some(parent) = p.parent() {
                std::fs::create_dir_all(parent)?;
            }
            std::fs::write(p, text)?;
        }
        self.written = now;
        self.git(&["add", "-A"])?;
        let date = format!("{} +0000", 1_600_000_000u64 + 3600 * self.commits as u64);
        self.git_env(&["commit", "-q", "--allow-empty", "-m", message], &[("GIT_AUTHOR_DATE", &date), ("GIT_COMMITTER_DATE", &date)])?;
        self.commits += 1;
        self.head = self.git(&["rev-parse", "HEAD"])?.trim().to_string();
        Ok(())
    }

    fn git(&self, args: &[&str]) -> Result<String, FixtureError> {
        self.git_env(args, &[])
    }

    fn git_env(&self, args: &[&str], env: &[(&str, &str)]) -> Result<String, FixtureError> {
        let git = git_binary();
        let out = Command::new(&git)
            .arg("-C")
            .arg(&self.path)
            .args(["-c", "user.name=Fixture Author", "-c", "user.email=fixture@example.com", "-c", "commit.gpgsign=false", "-c", "core.autocrlf=false"])
            .args(args)
            .env("GIT_CONFIG_NOSYSTEM", "1")
            .env("GIT_CONFIG_GLOBAL", "/dev/null")
            .env("LC_ALL", "C")
            .envs(env.iter().copied())
            .output()
            .map_err(|e| FixtureError::GitUnavailable(format!("{git}: {e}")))?;
        if !out.status.success() {
            return Err(FixtureError::Git { args: args.join(" "), message: String::from_utf8_lossy(&out.stderr).trim().to_string() });
        }
        Ok(String::from_utf8_lossy(&out.stdout).into_owned())
    }
}
