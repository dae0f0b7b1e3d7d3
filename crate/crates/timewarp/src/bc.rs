//! Supervised training records from stored trajectories: standard
//! action-only targets, full-response targets, and the eight token-mask
//! projections between them, with per-version subsetting and deterministic
//! export.

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::harness::{AgentResponse, Trajectory};
use crate::taskset::Split;
use crate::types::Version;

#[derive(Debug, Error)]
pub enum BcError {
    #[error("trajectory store is empty")]
    EmptyStore,
    #[error("unknown version filter: {0}")]
    UnknownVersionFilter(String),
    #[error("unknown export format: {0}")]
    UnknownFormat(String),
    #[error("trajectory {0} has reward 0; the store must hold successful trajectories only")]
    RewardZero(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// Which non-action blocks the training target keeps. The action block is
/// always included; the step block travels with the plan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenMask {
    pub include_think: bool,
    pub include_plan: bool,
    pub include_memory: bool,
}

impl TokenMask {
    pub const ACTION_ONLY: TokenMask = TokenMask {
        include_think: false,
        include_plan: false,
        include_memory: false,
    };
    pub const FULL: TokenMask = TokenMask {
        include_think: true,
        include_plan: true,
        include_memory: true,
    };

    /// All 8 combinations, action-only first, full-response last.
    pub fn all() -> [TokenMask; 8] {
        let mut out = [TokenMask::ACTION_ONLY; 8];
        let mut i = 0;
        for think in [false, true] {
            for plan in [false, true] {
                for memory in [false, true] {
                    out[i] = TokenMask {
                        include_think: think,
                        include_plan: plan,
                        include_memory: memory,
                    };
                    i += 1;
                }
            }
        }
        out.sort_by_key(|m| m.signature().len());
        out
    }

    /// Compact signature: `a` plus `c` (think), `p` (plan), `m` (memory).
    pub fn signature(&self) -> String {
        let mut s = String::from("a");
        if self.include_think {
            s.push('c');
        }
        if self.include_plan {
            s.push('p');
        }
        if self.include_memory {
            s.push('m');
        }
        s
    }

    pub fn parse(s: &str) -> Option<TokenMask> {
        let mut mask = TokenMask::ACTION_ONLY;
        if !s.starts_with('a') {
            return None;
        }
        for c in s.chars().skip(1) {
            match c {
                'c' => mask.include_think = true,
                'p' => mask.include_plan = true,
                'm' => mask.include_memory = true,
                _ => return None,
            }
        }
        Some(mask)
    }

    /// Subset relation on included blocks.
    pub fn subset_of(&self, other: &TokenMask) -> bool {
        (!self.include_think || other.include_think)
            && (!self.include_plan || other.include_plan)
            && (!self.include_memory || other.include_memory)
    }
}

/// Project a stored response onto a mask, in canonical block order
/// think, plan, step, memory, action.
pub fn render_target(response: &AgentResponse, mask: TokenMask) -> String {
    let mut blocks: Vec<String> = Vec::with_capacity(5);
    if mask.include_think {
        blocks.push(format!("<think>\n{}\n</think>", response.think));
    }
    if mask.include_plan {
        blocks.push(format!("<plan>\n{}\n</plan>", response.plan));
        blocks.push(format!("<step>{}</step>", response.step));
    }
    if mask.include_memory {
        blocks.push(format!("<memory>\n{}\n</memory>", response.memory));
    }
    blocks.push(format!("<action>\n{}\n</action>", response.action_raw));
    blocks.join("\n\n")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecordMeta {
    pub goal_id: String,
    pub version: Version,
    pub step_index: usize,
    pub mask_signature: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainingRecord {
    pub prompt: String,
    pub target: String,
    pub meta: RecordMeta,
}

/// One record per (trajectory, parsed step), filtered to the requested
/// versions and split. Store trajectories must all carry reward 1.
pub fn build_dataset(
    trajectories: &[Trajectory],
    mask: TokenMask,
    versions: &[Version],
    split: Option<Split>,
) -> Result<Vec<TrainingRecord>, BcError> {
    if trajectories.is_empty() {
        return Err(BcError::EmptyStore);
    }
    let wanted: BTreeSet<Version> = versions.iter().copied().collect();
    let mut out = Vec::new();
    for trajectory in trajectories {
        if trajectory.reward != 1 {
            return Err(BcError::RewardZero(trajectory.id()));
        }
        if !wanted.contains(&trajectory.version) {
            continue;
        }
        if let Some(split) = split {
            if trajectory.meta.split != split {
                continue;
            }
        }
        for (i, step) in trajectory.steps.iter().enumerate() {
            let Some(parsed) = &step.parsed else {
                continue;
            };
            out.push(TrainingRecord {
                prompt: step.prompt.clone(),
                target: render_target(parsed, mask),
                meta: RecordMeta {
                    goal_id: trajectory.goal_id.clone(),
                    version: trajectory.version,
                    step_index: i + 1,
                    mask_signature: mask.signature(),
                },
            });
        }
    }
    Ok(out)
}

/// Parse a version-filter expression (`v6`, `v1:6`, `v1:5`, `all`), mapping
/// failures to the dataset error type.
pub fn parse_version_filter(s: &str) -> Result<Vec<Version>, BcError> {
    Version::parse_set(s).map_err(|_| BcError::UnknownVersionFilter(s.to_string()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Jsonl,
}

impl ExportFormat {
    pub fn parse(s: &str) -> Result<ExportFormat, BcError> {
        match s.to_ascii_lowercase().as_str() {
            "jsonl" => Ok(ExportFormat::Jsonl),
            other => Err(BcError::UnknownFormat(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExportManifest {
    pub count: usize,
    pub mask_signature: String,
    pub version_filter: String,
    pub split: Option<String>,
    pub content_hash: String,
}

/// Write records as line-delimited JSON plus a manifest carrying the content
/// hash. Re-exporting identical inputs yields an identical hash.
pub fn export(
    records: &[TrainingRecord],
    path: &Path,
    format: ExportFormat,
    version_filter: &str,
    split: Option<Split>,
) -> Result<ExportManifest, BcError> {
    let ExportFormat::Jsonl = format;
    let mut body = String::new();
    for record in records {
        body.push_str(&serde_json::to_string(record)?);
        body.push('\n');
    }
    std::fs::write(path, &body)?;
    let mut hasher = Sha256::new();
    hasher.update(body.as_bytes());
    let content_hash: String = hasher.finalize().iter().map(|b| format!("{b:02x}")).collect();
    let manifest = ExportManifest {
        count: records.len(),
        mask_signature: records
            .first()
            .map(|r| r.meta.mask_signature.clone())
            .unwrap_or_else(|| "a".to_string()),
        version_filter: version_filter.to_string(),
        split: split.map(|s| match s {
            Split::Train => "train".to_string(),
            Split::Test => "test".to_string(),
        }),
        content_hash,
    };
    let manifest_path = path.with_extension("manifest.json");
    std::fs::write(&manifest_path, serde_json::to_string_pretty(&manifest)?)?;
    Ok(manifest)
}

/// Read an exported JSONL file back into records.
pub fn import(path: &Path) -> Result<Vec<TrainingRecord>, BcError> {
    let raw = std::fs::read_to_string(path)?;
    raw.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| serde_json::from_str(l).map_err(BcError::from))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::Action;
    use crate::harness::format_response;

    fn response() -> AgentResponse {
        AgentResponse {
            think: "consider the page".into(),
            plan: "1. search\n2. answer".into(),
            step: 2,
            memory: "code is ABC".into(),
            action_raw: "click('7')".into(),
            action: Action::click("7"),
            raw: format_response("consider the page", "1. search\n2. answer", 2, "code is ABC", "click('7')"),
        }
    }

    #[test]
    fn eight_masks_with_distinct_signatures() {
        let masks = TokenMask::all();
        let signatures: BTreeSet<String> = masks.iter().map(|m| m.signature()).collect();
        assert_eq!(signatures.len(), 8);
        assert!(signatures.contains("a"));
        assert!(signatures.contains("acpm"));
        for m in masks {
            assert_eq!(TokenMask::parse(&m.signature()), Some(m));
        }
    }

    #[test]
    fn action_only_target_is_just_the_action_block() {
        let target = render_target(&response(), TokenMask::ACTION_ONLY);
        assert_eq!(target, "<action>\nclick('7')\n</action>");
    }

    #[test]
    fn full_mask_equals_the_stored_raw_response() {
        let r = response();
        assert_eq!(render_target(&r, TokenMask::FULL), r.raw);
    }

    #[test]
    fn masks_project_to_pairwise_distinct_targets() {
        let r = response();
        let targets: BTreeSet<String> = TokenMask::all()
            .iter()
            .map(|m| render_target(&r, *m))
            .collect();
        assert_eq!(targets.len(), 8);
    }

    #[test]
    fn mask_monotonicity_blocks_nest() {
        let r = response();
        for a in TokenMask::all() {
            for b in TokenMask::all() {
                if a.subset_of(&b) {
                    let ta = render_target(&r, a);
                    let tb = render_target(&r, b);
                    for tag in ["<think>", "<plan>", "<step>", "<memory>", "<action>"] {
                        if ta.contains(tag) {
                            assert!(tb.contains(tag), "{} ⊆ {}", a.signature(), b.signature());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn exporting_zero_records_yields_empty_file_and_zero_count() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("empty.jsonl");
        let manifest = export(&[], &path, ExportFormat::Jsonl, "all", None).unwrap();
        assert_eq!(manifest.count, 0);
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "");
        let again = export(&[], &path, ExportFormat::Jsonl, "all", None).unwrap();
        assert_eq!(manifest.content_hash, again.content_hash);
    }

    #[test]
    fn version_filters_parse_table_style_expressions() {
        assert_eq!(parse_version_filter("v6").unwrap(), vec![Version::V6]);
        assert_eq!(parse_version_filter("v1:6").unwrap().len(), 6);
        assert_eq!(parse_version_filter("v1:5").unwrap().len(), 5);
        assert!(parse_version_filter("v9").is_err());
    }
}
