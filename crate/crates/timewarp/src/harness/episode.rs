//! The observe → prompt → respond → parse → step loop, judged at the end.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::env::{final_reward, EnvApiError, EnvSession, Observation};
use crate::judge::{self, JudgeBackend, JudgeError, JudgeVerdict};
use crate::sites::Backends;
use crate::taskset::{Split, TaskEnv, TaskInstance};
use crate::types::Version;

use super::agents::{Agent, AgentError};
use super::prompt::{build_prompt, PromptConfig};
use super::response::{parse_response, AgentResponse};

#[derive(Debug, Error)]
pub enum EpisodeError {
    #[error(transparent)]
    Agent(#[from] AgentError),
    #[error(transparent)]
    Judge(#[from] JudgeError),
    #[error(transparent)]
    Env(#[from] EnvApiError),
}

#[derive(Debug, Clone)]
pub struct EpisodeConfig {
    pub max_steps: usize,
    pub prompt: PromptConfig,
    /// Refined plan injected as Execution Instructions (teacher mode).
    pub execution_plan: Option<String>,
    pub seed: u64,
}

impl Default for EpisodeConfig {
    fn default() -> Self {
        EpisodeConfig {
            max_steps: crate::env::DEFAULT_MAX_STEPS,
            prompt: PromptConfig::default(),
            execution_plan: None,
            seed: 0,
        }
    }
}

/// One (observation, response) pair. The prompt is stored verbatim so
/// training records can assert byte-exact fidelity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryStep {
    pub observation: Observation,
    pub prompt: String,
    pub raw_response: String,
    pub parsed: Option<AgentResponse>,
    pub parse_error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryMeta {
    pub env: TaskEnv,
    pub category: String,
    pub split: Split,
    pub teacher_id: String,
    pub seed: u64,
    pub collected_unix: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub goal_id: String,
    pub version: Version,
    pub goal: String,
    /// The plan the teacher followed, when one was injected.
    pub execution_plan: Option<String>,
    pub steps: Vec<TrajectoryStep>,
    pub final_message: Option<String>,
    pub infeasible_reason: Option<String>,
    pub verdict: Option<JudgeVerdict>,
    pub reward: u8,
    pub meta: TrajectoryMeta,
}

impl Trajectory {
    pub fn id(&self) -> String {
        format!("{}@{}", self.goal_id, self.version)
    }
}

/// Run one episode to termination and judge the final message.
///
/// Agent output that fails to parse consumes a step with an in-band error;
/// only backend unavailability aborts the episode.
pub fn run_episode(
    instance: &TaskInstance,
    backends: &Backends,
    agent: &mut dyn Agent,
    judge_backend: &JudgeBackend,
    config: &EpisodeConfig,
) -> Result<Trajectory, EpisodeError> {
    let task = &instance.task;
    let (mut session, mut observation) =
        EnvSession::reset(task, instance.version, backends, config.max_steps);
    let mut history: Vec<AgentResponse> = Vec::new();
    let mut steps: Vec<TrajectoryStep> = Vec::new();

    loop {
        let prompt = build_prompt(
            &task.goal,
            &observation,
            &history,
            config.execution_plan.as_deref(),
            &config.prompt,
        );
        let raw = agent.respond(&prompt)?;
        match parse_response(&raw) {
            Ok(response) => {
                let outcome = session.step(&response.action, backends)?;
                steps.push(TrajectoryStep {
                    observation,
                    prompt,
                    raw_response: raw,
                    parsed: Some(response.clone()),
                    parse_error: None,
                });
                history.push(response);
                observation = outcome.observation;
                if outcome.terminated {
                    break;
                }
            }
            Err(parse_error) => {
                let outcome = session.note_agent_error(&parse_error.to_string())?;
                steps.push(TrajectoryStep {
                    observation,
                    prompt,
                    raw_response: raw,
                    parsed: None,
                    parse_error: Some(parse_error.to_string()),
                });
                observation = outcome.observation;
                if outcome.terminated {
                    break;
                }
            }
        }
    }

    let (verdict, reward) = match session.final_message.clone() {
        Some(message) => {
            let verdict = judge::judge(
                &task.goal,
                &task.references,
                task.match_mode,
                &message,
                task.flags,
                judge_backend,
            )?;
            let reward = final_reward(&session, &verdict)?;
            (Some(verdict), reward)
        }
        None => (None, 0),
    };

    Ok(Trajectory {
        goal_id: task.goal_id.clone(),
        version: instance.version,
        goal: task.goal.clone(),
        execution_plan: config.execution_plan.clone(),
        steps,
        final_message: session.final_message.clone(),
        infeasible_reason: session.infeasible_reason.clone(),
        verdict,
        reward,
        meta: TrajectoryMeta {
            env: task.env,
            category: task.category.clone(),
            split: task.split,
            teacher_id: agent.id(),
            seed: config.seed,
            collected_unix: std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        },
    })
}
