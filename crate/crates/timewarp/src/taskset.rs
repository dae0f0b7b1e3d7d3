//! Task dataset schema, loading, validation, splits, and the goals × versions
//! cross-product.
//!
//! Task files are UTF-8 JSON Lines, one task per line. A companion manifest
//! records the expected totals per split and category so dataset integrity is
//! machine-checkable.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::types::{Site, Version};

#[derive(Debug, Error)]
pub enum TaskError {
    #[error("schema error at line {line}: {reason}")]
    Schema { line: usize, reason: String },
    #[error("duplicate goal_id: {0}")]
    DuplicateGoalId(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TaskEnv {
    Wiki,
    News,
    Shop,
    Multi,
}

impl TaskEnv {
    pub fn name(&self) -> &'static str {
        match self {
            TaskEnv::Wiki => "wiki",
            TaskEnv::News => "news",
            TaskEnv::Shop => "shop",
            TaskEnv::Multi => "multi",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Test,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatchMode {
    /// OR logic: one judge call per reference, success if any is correct.
    #[default]
    Any,
    /// AND logic: references concatenated into one string, a single call.
    AllAsOne,
}

/// Flags steering the rule-based matcher for this task's answers.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnswerFlags {
    /// List answers compare as unordered sets instead of exact sequences.
    #[serde(default)]
    pub unordered: bool,
    /// Numeric answers compare within a relative tolerance instead of exactly.
    #[serde(default)]
    pub estimate: bool,
}

/// A version-invariant goal: the same record instantiates on all six versions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaskSpec {
    pub goal_id: String,
    pub env: TaskEnv,
    pub category: String,
    pub goal: String,
    pub references: Vec<String>,
    #[serde(default)]
    pub match_mode: MatchMode,
    pub start_site: Site,
    pub split: Split,
    #[serde(default)]
    pub flags: AnswerFlags,
    /// Sites the goal touches; must list at least two when env = multi.
    #[serde(default)]
    pub sites: Vec<Site>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaskInstance {
    pub task: TaskSpec,
    pub version: Version,
}

impl TaskInstance {
    pub fn id(&self) -> String {
        format!("{}@{}", self.task.goal_id, self.version)
    }
}

/// Expected dataset totals, shipped next to the task file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaskManifest {
    pub goals: usize,
    pub instances: usize,
    pub per_split: BTreeMap<String, usize>,
    pub per_category: BTreeMap<String, usize>,
}

pub fn load_tasks_str(content: &str) -> Result<Vec<TaskSpec>, TaskError> {
    let mut tasks: Vec<TaskSpec> = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for (idx, line) in content.lines().enumerate() {
        let lineno = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let task: TaskSpec = serde_json::from_str(line).map_err(|e| TaskError::Schema {
            line: lineno,
            reason: e.to_string(),
        })?;
        validate(&task).map_err(|reason| TaskError::Schema { line: lineno, reason })?;
        if !seen.insert(task.goal_id.clone()) {
            return Err(TaskError::DuplicateGoalId(task.goal_id));
        }
        tasks.push(task);
    }
    Ok(tasks)
}

pub fn load_tasks(path: &Path) -> Result<Vec<TaskSpec>, TaskError> {
    load_tasks_str(&std::fs::read_to_string(path)?)
}

fn validate(task: &TaskSpec) -> Result<(), String> {
    if task.goal_id.trim().is_empty() {
        return Err("empty goal_id".into());
    }
    if task.goal.trim().is_empty() {
        return Err("empty goal".into());
    }
    if task.references.is_empty() {
        return Err("references must be nonempty".into());
    }
    if task.env == TaskEnv::Multi && task.sites.len() < 2 {
        return Err("multi-site goals must list at least two sites".into());
    }
    Ok(())
}

/// The goals × versions cross product, ordered by (goal_id, version).
pub fn instantiate(specs: &[TaskSpec], versions: &[Version]) -> Vec<TaskInstance> {
    let mut sorted_versions = versions.to_vec();
    sorted_versions.sort();
    sorted_versions.dedup();
    let mut out: Vec<TaskInstance> = specs
        .iter()
        .flat_map(|task| {
            sorted_versions.iter().map(move |v| TaskInstance {
                task: task.clone(),
                version: *v,
            })
        })
        .collect();
    out.sort_by(|a, b| {
        a.task
            .goal_id
            .cmp(&b.task.goal_id)
            .then_with(|| a.version.cmp(&b.version))
    });
    out
}

/// Recompute manifest totals from loaded specs.
pub fn manifest_of(specs: &[TaskSpec], versions: &[Version]) -> TaskManifest {
    let mut per_split = BTreeMap::new();
    let mut per_category = BTreeMap::new();
    for task in specs {
        let split = match task.split {
            Split::Train => "train",
            Split::Test => "test",
        };
        *per_split.entry(split.to_string()).or_insert(0) += 1;
        *per_category.entry(task.category.clone()).or_insert(0) += 1;
    }
    TaskManifest {
        goals: specs.len(),
        instances: specs.len() * versions.len(),
        per_split,
        per_category,
    }
}
