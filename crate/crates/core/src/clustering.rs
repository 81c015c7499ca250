//! Groups candidates by right-hand side into replacement rules `C → API`.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::detector::CandidateReplacement;
use crate::library::LibraryCoordinate;

pub const RULES_FILE: &str = "rules.jsonl";

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RhsKey {
    pub api_simple_name: String,
    pub libraries: BTreeSet<LibraryCoordinate>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RuleMember {
    pub repo_id: String,
    pub sha: String,
    pub method_signature: String,
    pub signature_text: String,
    pub file_path: String,
    pub body_text: String,
    pub replacement_count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReplacementRule {
    pub rhs_key: RhsKey,
    pub support: usize,
    pub lhs: Vec<RuleMember>,
}

/// Partitions candidates by API name and library attribution.
///
/// Within one API name, candidates whose library sets overlap (directly or
/// transitively) form one rule. Its key holds the common libraries when
/// they share any, otherwise every library seen.
pub fn cluster_by_rhs(candidates: &[CandidateReplacement]) -> Vec<ReplacementRule> {
    let mut by_api: BTreeMap<&str, Vec<&CandidateReplacement>> = BTreeMap::new();
    for c in candidates {
        by_api.entry(c.api_simple_name.as_str()).or_default().push(c);
    }
    let mut rules = Vec::new();
    for (api, group) in by_api {
        for component in overlap_components(&group) {
            let sets: Vec<&BTreeSet<LibraryCoordinate>> = component.iter().map(|c| &c.candidate_libraries).collect();
            let common: BTreeSet<LibraryCoordinate> = sets
                .iter()
                .skip(1)
                .fold(sets[0].clone(), |acc, s| acc.intersection(s).cloned().collect());
            let libraries = if common.is_empty() {
                sets.iter().flat_map(|s| s.iter().cloned()).collect()
            } else {
                common
            };
            let mut members: BTreeMap<(String, String, String), RuleMember> = BTreeMap::new();
            for c in component {
                let sig = c.method_signature();
                members
                    .entry((c.repo_id.clone(), c.sha.clone(), sig.clone()))
                    .and_modify(|m| m.replacement_count += c.replacement_count)
                    .or_insert_with(|| RuleMember {
                        repo_id: c.repo_id.clone(),
                        sha: c.sha.clone(),
                        method_signature: sig,
                        signature_text: c.custom_method.signature_text.clone(),
                        file_path: c.custom_method.file_path.clone(),
                        body_text: c.custom_method.body_text.clone(),
                        replacement_count: c.replacement_count,
                    });
            }
            let lhs: Vec<RuleMember> = members.into_values().collect();
            rules.push(ReplacementRule {
                rhs_key: RhsKey { api_simple_name: api.to_string(), libraries },
                support: lhs.len(),
                lhs,
            });
        }
    }
    rules.sort_by(|a, b| b.support.cmp(&a.support).then_with(|| a.rhs_key.cmp(&b.rhs_key)));
    rules
}

fn overlap_components<'a>(group: &[&'a CandidateReplacement]) -> Vec<Vec<&'a CandidateReplacement>> {
    let mut parent: Vec<usize> = (0..group.len()).collect();
    fn find(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    let mut owner: BTreeMap<&LibraryCoordinate, usize> = BTreeMap::new();
    for (i, c) in group.iter().enumerate() {
        for lib in &c.candidate_libraries {
            match owner.get(lib) {
                Some(&j) => {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    parent[a.max(b)] = a.min(b);
                }
                None => {
                    owner.insert(lib, i);
                }
            }
        }
    }
    let mut comps: BTreeMap<usize, Vec<&CandidateReplacement>> = BTreeMap::new();
    for (i, c) in group.iter().enumerate() {
        let root = find(&mut parent, i);
        comps.entry(root).or_default().push(c);
    }
    comps.into_values().collect()
}
