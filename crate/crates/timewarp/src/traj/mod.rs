//! Trajectory collection: draft-plan generation, human plan refinement via
//! plan files, teacher rollouts across versions, and judge filtering. Only
//! reward-1 trajectories enter the store; every dropped attempt lands in the
//! drop log, so kept + dropped always equals the attempts made.

pub mod store;

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::mpsc;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::harness::{
    run_episode, EpisodeConfig, HttpAgent, OracleAgent, PromptConfig, ScriptedAgent, Trajectory,
};
use crate::judge::JudgeBackend;
use crate::net::ChatClient;
use crate::sites::Backends;
use crate::taskset::{TaskInstance, TaskSpec};
use crate::types::Version;

pub use store::{DropEntry, StoreManifest, TrajectoryStore};

#[derive(Debug, Error)]
pub enum TrajError {
    #[error("planner backend unavailable: {0}")]
    BackendUnavailable(String),
    #[error("plan for {goal_id} leaks version token {token:?} at line {line}")]
    VersionLeak {
        goal_id: String,
        token: String,
        line: usize,
    },
    #[error("plan for {0} has no numbered steps")]
    EmptyPlan(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("episode failed for {id}: {reason}")]
    Episode { id: String, reason: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PlanStatus {
    Draft,
    Refined,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanRecord {
    pub goal_id: String,
    pub draft_plan: String,
    pub refined_plan: Option<String>,
    pub status: PlanStatus,
}

impl PlanRecord {
    pub fn plan_text(&self) -> &str {
        self.refined_plan.as_deref().unwrap_or(&self.draft_plan)
    }
}

/// One numbered step of a refined plan.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub index: usize,
    pub text: String,
    /// True for steps that message the user and end the episode.
    pub terminal: bool,
}

/// The draft-plan prompt with its two substitution slots filled in.
pub fn planner_prompt(goal: &str, reference: &str) -> String {
    format!(
        "You are a planning agent who creates step-by-step execution instructions for web-based \
tasks. Your instructions will guide another agent to complete tasks by interacting with the web \
elements. Generate a precise, executable plan that:\n\
- Breaks down the task into clear, sequential steps.\n\
- Specifies exact web interactions or action verbs (type, click, navigate, check, etc.).\n\
- Includes verification steps where needed.\n\
- Concludes with the final action (e.g., reporting results to the user). Include the reasoning \
behind generating the final output.\n\n\
# Input Format:\n\
- Task Goal: {goal}\n\
- Reference Answer: {reference}\n\n\
# Example:\n\n\
Task Goal: Is biophysics mentioned as a related page or branch in the Biology article, the \
Physics article, both, or neither of them?\n\n\
Reference Answer: Biology\n\n\
Execution Plan:\n\
1. Type 'Biology' in the search box and press Enter.\n\
2. Check the related branches and related pages sections to see if Biophysics is present.\n\
3. Type 'Physics' in the search box and press Enter.\n\
4. Check the branches and related pages sections to see if Biophysics is present.\n\
5. As Biophysics was only present in the Biology article's branches section, send a message to \
the user: 'Biology'."
    )
}

/// Where draft plans come from.
pub enum PlannerBackend {
    /// Empty drafts for fully manual plan writing.
    Manual,
    /// Canned drafts keyed by goal_id (hermetic tests and bundled data).
    Scripted(BTreeMap<String, String>),
    Http(ChatClient),
}

/// One draft plan per goal, ready to be written out for human refinement.
pub fn distill_plans(
    goals: &[TaskSpec],
    backend: &PlannerBackend,
) -> Result<Vec<PlanRecord>, TrajError> {
    let mut out = Vec::with_capacity(goals.len());
    for task in goals {
        let reference = task.references.join(", ");
        let draft = match backend {
            PlannerBackend::Manual => String::new(),
            PlannerBackend::Scripted(drafts) => {
                drafts.get(&task.goal_id).cloned().unwrap_or_default()
            }
            PlannerBackend::Http(client) => client
                .complete(&planner_prompt(&task.goal, &reference))
                .map_err(TrajError::BackendUnavailable)?,
        };
        out.push(PlanRecord {
            goal_id: task.goal_id.clone(),
            draft_plan: draft,
            refined_plan: None,
            status: PlanStatus::Draft,
        });
    }
    Ok(out)
}

/// Write draft plan files (`<goal_id>.plan`) for human editing.
pub fn write_plan_files(records: &[PlanRecord], dir: &Path) -> Result<(), TrajError> {
    std::fs::create_dir_all(dir)?;
    for record in records {
        std::fs::write(
            dir.join(format!("{}.plan", record.goal_id)),
            format!("{}\n", record.plan_text().trim_end()),
        )?;
    }
    Ok(())
}

const VERSION_LEAK_TOKENS: &[&str] = &["temu", "webshop"];

/// Reject plans that mention a concrete version or era skin.
pub fn lint_version_independence(goal_id: &str, plan: &str) -> Result<(), TrajError> {
    for (lineno, line) in plan.lines().enumerate() {
        let lower = line.to_lowercase();
        for token in lower.split(|c: char| !c.is_alphanumeric()) {
            if token.len() == 2
                && token.starts_with('v')
                && token[1..].chars().all(|c| ('1'..='6').contains(&c))
            {
                return Err(TrajError::VersionLeak {
                    goal_id: goal_id.to_string(),
                    token: token.to_string(),
                    line: lineno + 1,
                });
            }
            if VERSION_LEAK_TOKENS.contains(&token) {
                return Err(TrajError::VersionLeak {
                    goal_id: goal_id.to_string(),
                    token: token.to_string(),
                    line: lineno + 1,
                });
            }
        }
        // "version 3" style phrases
        if let Some(idx) = lower.find("version ") {
            let after = lower[idx + 8..].chars().next();
            if matches!(after, Some('1'..='6')) {
                return Err(TrajError::VersionLeak {
                    goal_id: goal_id.to_string(),
                    token: "version".to_string(),
                    line: lineno + 1,
                });
            }
        }
    }
    Ok(())
}

/// Parse the numbered checkpoints of a plan.
pub fn parse_checkpoints(plan: &str) -> Vec<Checkpoint> {
    let mut out = Vec::new();
    for line in plan.lines() {
        let trimmed = line.trim();
        let Some(dot) = trimmed.find(['.', ')', ':']) else {
            continue;
        };
        if dot == 0 || !trimmed[..dot].chars().all(|c| c.is_ascii_digit()) {
            continue;
        }
        let text = trimmed[dot + 1..].trim().to_string();
        let lower = text.to_lowercase();
        let terminal = (lower.contains("send") && lower.contains("to the user"))
            || lower.contains("report that the task is infeasible");
        out.push(Checkpoint { index: out.len() + 1, text, terminal });
    }
    out
}

/// Read human-refined plan files back, enforcing version independence.
pub fn ingest_refined(plan_dir: &Path) -> Result<Vec<PlanRecord>, TrajError> {
    let mut records = Vec::new();
    let mut paths: Vec<_> = std::fs::read_dir(plan_dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().and_then(|e| e.to_str()) == Some("plan"))
        .collect();
    paths.sort();
    for path in paths {
        let goal_id = path
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or_default()
            .to_string();
        let text = std::fs::read_to_string(&path)?;
        lint_version_independence(&goal_id, &text)?;
        if parse_checkpoints(&text).is_empty() {
            return Err(TrajError::EmptyPlan(goal_id));
        }
        records.push(PlanRecord {
            goal_id,
            draft_plan: text.clone(),
            refined_plan: Some(text),
            status: PlanStatus::Refined,
        });
    }
    Ok(records)
}

/// Who executes the plans.
pub enum TeacherBackend {
    /// The built-in plan-following oracle.
    Oracle,
    /// Canned responses per goal_id (hermetic tests).
    Scripted(BTreeMap<String, Vec<String>>),
    /// A remote model; one fresh conversation per episode.
    Http {
        base_url: String,
        model: String,
        api_key: Option<String>,
    },
}

impl TeacherBackend {
    fn id(&self) -> &'static str {
        match self {
            TeacherBackend::Oracle => "oracle",
            TeacherBackend::Scripted(_) => "scripted",
            TeacherBackend::Http { .. } => "http",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RolloutSummary {
    pub attempted: usize,
    pub kept: usize,
    pub dropped: usize,
}

pub struct RolloutConfig {
    pub max_steps: usize,
    pub prompt: PromptConfig,
    pub parallelism: usize,
    pub seed: u64,
}

impl Default for RolloutConfig {
    fn default() -> Self {
        RolloutConfig {
            max_steps: crate::env::DEFAULT_MAX_STEPS,
            prompt: PromptConfig::default(),
            parallelism: 4,
            seed: 0,
        }
    }
}

/// Execute every (goal, version) pair with the teacher, judge the outcome,
/// and persist only reward-1 trajectories. Returns the bookkeeping summary;
/// kept + dropped = goals × versions attempted.
#[allow(clippy::too_many_arguments)]
pub fn teacher_rollouts(
    goals: &[TaskSpec],
    plans: &[PlanRecord],
    versions: &[Version],
    teacher: &TeacherBackend,
    judge: &JudgeBackend,
    backends: &Backends,
    store: &TrajectoryStore,
    config: &RolloutConfig,
) -> Result<RolloutSummary, TrajError> {
    let plan_of: BTreeMap<&str, &PlanRecord> =
        plans.iter().map(|p| (p.goal_id.as_str(), p)).collect();

    let mut jobs: Vec<(TaskSpec, Version, String)> = Vec::new();
    for task in goals {
        let Some(plan) = plan_of.get(task.goal_id.as_str()) else {
            continue;
        };
        for version in versions {
            jobs.push((task.clone(), *version, plan.plan_text().to_string()));
        }
    }

    let attempted = jobs.len();
    let mut kept = 0usize;
    let mut dropped = 0usize;
    let mut kept_ids: Vec<String> = Vec::new();

    let workers = config.parallelism.max(1);
    let (result_tx, result_rx) = mpsc::channel::<Result<Trajectory, TrajError>>();
    let jobs_queue = std::sync::Mutex::new(jobs.into_iter());

    std::thread::scope(|scope| {
        for _ in 0..workers {
            let result_tx = result_tx.clone();
            let jobs_queue = &jobs_queue;
            scope.spawn(move || loop {
                let job = jobs_queue.lock().unwrap().next();
                let Some((task, version, plan_text)) = job else { break };
                let result =
                    run_rollout_episode(&task, version, &plan_text, teacher, judge, backends, config);
                if result_tx.send(result).is_err() {
                    break;
                }
            });
        }
        drop(result_tx);

        // single writer: persist results as they arrive
        for result in result_rx.iter() {
            match result {
                Ok(trajectory) => {
                    if trajectory.reward == 1 {
                        if let Err(e) = store.save(&trajectory) {
                            eprintln!("failed to persist {}: {e}", trajectory.id());
                        } else {
                            kept += 1;
                            kept_ids.push(trajectory.id());
                        }
                    } else {
                        dropped += 1;
                        let entry = DropEntry {
                            goal_id: trajectory.goal_id.clone(),
                            version: trajectory.version,
                            label: trajectory.verdict.as_ref().map(|v| v.label),
                            final_message: trajectory.final_message.clone(),
                            steps: trajectory.steps.len(),
                        };
                        let _ = store.append_drop(&entry);
                    }
                }
                Err(e) => {
                    eprintln!("rollout failed: {e}");
                    dropped += 1;
                }
            }
        }
    });

    kept_ids.sort();
    store.write_manifest(&StoreManifest {
        kept,
        dropped,
        trajectory_ids: kept_ids,
    })?;
    Ok(RolloutSummary { attempted, kept, dropped })
}

fn run_rollout_episode(
    task: &TaskSpec,
    version: Version,
    plan_text: &str,
    teacher: &TeacherBackend,
    judge: &JudgeBackend,
    backends: &Backends,
    config: &RolloutConfig,
) -> Result<Trajectory, TrajError> {
    let episode_config = EpisodeConfig {
        max_steps: config.max_steps,
        prompt: config.prompt.clone(),
        execution_plan: Some(plan_text.to_string()),
        seed: config.seed,
    };
    let instance = TaskInstance { task: task.clone(), version };
    let id = instance.id();
    let mut agent: Box<dyn crate::harness::Agent> = match teacher {
        TeacherBackend::Oracle => Box::new(OracleAgent::new(&task.goal_id, plan_text)),
        TeacherBackend::Scripted(map) => Box::new(ScriptedAgent::new(
            &task.goal_id,
            map.get(&task.goal_id).cloned().unwrap_or_default(),
        )),
        TeacherBackend::Http { base_url, model, api_key } => Box::new(
            HttpAgent::new(base_url, model, api_key.clone(), Duration::from_secs(120))
                .map_err(|e| TrajError::Episode { id: id.clone(), reason: e.to_string() })?,
        ),
    };
    run_episode(&instance, backends, agent.as_mut(), judge, &episode_config)
        .map_err(|e| TrajError::Episode { id, reason: e.to_string() })
}

// teacher id is recorded by the agent itself; keep the backend name exported
impl std::fmt::Display for TeacherBackend {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.id())
    }
}
