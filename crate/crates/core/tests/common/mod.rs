#![allow(dead_code)]

pub mod javagen;
pub mod reference;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use reuse_miner::parser::FileSurface;

pub fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data")
}

/// Real-world corpus files, sorted by name.
pub fn real_corpus() -> Vec<(String, String)> {
    let mut files: Vec<_> = std::fs::read_dir(data_dir().join("java-corpus"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "java"))
        .collect();
    files.sort();
    files
        .into_iter()
        .map(|p| {
            let name = p.file_name().unwrap().to_string_lossy().into_owned();
            (name, std::fs::read_to_string(&p).unwrap())
        })
        .collect()
}

pub fn generated_corpus(count: usize, seed: u64) -> Vec<(String, String)> {
    let mut gen = javagen::JavaGen::new(seed);
    (0..count).map(|i| (format!("Gen{i}.java"), gen.unit(i))).collect()
}

pub fn decl_multiset(s: &FileSurface) -> BTreeMap<(String, usize), usize> {
    let mut m = BTreeMap::new();
    for d in &s.declarations {
        *m.entry((d.simple_name.clone(), d.arity)).or_default() += 1;
    }
    m
}

pub fn call_multiset(s: &FileSurface) -> BTreeMap<(String, usize), usize> {
    let mut m = BTreeMap::new();
    for c in &s.invocations {
        *m.entry((c.simple_name.clone(), c.arg_count)).or_default() += 1;
    }
    m
}

/// Entries whose counts differ between two multisets.
pub fn multiset_diff(
    ours: &BTreeMap<(String, usize), usize>,
    theirs: &BTreeMap<(String, usize), usize>,
) -> Vec<String> {
    let mut keys: Vec<_> = ours.keys().chain(theirs.keys()).collect();
    keys.sort();
    keys.dedup();
    keys.into_iter()
        .filter_map(|k| {
            let a = ours.get(k).copied().unwrap_or(0);
            let b = theirs.get(k).copied().unwrap_or(0);
            (a != b).then(|| format!("{}/{}: ours={a} ref={b}", k.0, k.1))
        })
        .collect()
}
