//! Drops trivial methods and candidates below the call-replacement threshold.

use serde::{Deserialize, Serialize};

use crate::detector::CandidateReplacement;
use crate::parser::{classify_method, MethodKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct SelectorConfig {
    pub min_replacements: usize,
    pub drop_trivial: bool,
}

impl Default for SelectorConfig {
    fn default() -> Self {
        SelectorConfig { min_replacements: 2, drop_trivial: true }
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("min_replacements must be at least 1")]
pub struct InvalidThreshold;

impl SelectorConfig {
    pub fn new(min_replacements: usize, drop_trivial: bool) -> Result<Self, InvalidThreshold> {
        if min_replacements == 0 {
            return Err(InvalidThreshold);
        }
        Ok(SelectorConfig { min_replacements, drop_trivial })
    }

    pub fn keeps(&self, c: &CandidateReplacement) -> bool {
        c.replacement_count >= self.min_replacements
            && !(self.drop_trivial && classify_method(&c.custom_method) != MethodKind::Ordinary)
    }
}

/// Retained candidates, in input order.
pub fn select(candidates: &[CandidateReplacement], config: &SelectorConfig) -> Vec<CandidateReplacement> {
    candidates.iter().filter(|c| config.keeps(c)).cloned().collect()
}
