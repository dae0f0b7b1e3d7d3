//! End-to-end episodes: the plan-following oracle must solve every bundled
//! goal on every version, producing reward-1 trajectories whose observation
//! sequences differ across versions while the final answer matches.

use timewarp::assets::{bundled_backends, bundled_plan, bundled_tasks};
use timewarp::harness::{run_episode, EpisodeConfig, OracleAgent};
use timewarp::judge::JudgeBackend;
use timewarp::taskset::{TaskInstance, TaskSpec};
use timewarp::types::Version;

fn run_one(task: &TaskSpec, version: Version) -> timewarp::harness::Trajectory {
    let backends = bundled_backends();
    let plan = bundled_plan(&task.goal_id).expect("bundled plan");
    let mut agent = OracleAgent::new(&task.goal_id, plan);
    let config = EpisodeConfig {
        execution_plan: Some(plan.to_string()),
        ..Default::default()
    };
    let instance = TaskInstance { task: task.clone(), version };
    run_episode(&instance, &backends, &mut agent, &JudgeBackend::RuleBased, &config)
        .expect("episode runs")
}

#[test]
fn oracle_solves_every_bundled_goal_on_every_version() {
    let tasks = bundled_tasks();
    let mut failures = Vec::new();
    for task in &tasks {
        for version in Version::ALL {
            let trajectory = run_one(task, version);
            if trajectory.reward != 1 {
                failures.push(format!(
                    "{}@{}: answered {:?} after {} steps (wanted one of {:?})",
                    task.goal_id,
                    version,
                    trajectory.final_message,
                    trajectory.steps.len(),
                    task.references,
                ));
            }
        }
    }
    assert!(
        failures.is_empty(),
        "{} failures:\n{}",
        failures.len(),
        failures.join("\n")
    );
}

#[test]
fn observation_sequences_differ_across_versions_while_answers_match() {
    let tasks = bundled_tasks();
    let task = tasks.iter().find(|t| t.goal_id == "shop-order-vinyl").unwrap();
    let mut answers = Vec::new();
    let mut first_observations = Vec::new();
    for version in Version::ALL {
        let trajectory = run_one(task, version);
        assert_eq!(trajectory.reward, 1, "failed on {version}");
        answers.push(trajectory.final_message.clone().unwrap());
        first_observations.push(trajectory.steps[0].observation.html_text.clone());
    }
    answers.dedup();
    assert_eq!(answers.len(), 1, "same code on every version");
    let mut unique = first_observations.clone();
    unique.sort();
    unique.dedup();
    assert_eq!(unique.len(), 6, "each version renders distinct chrome");
}

#[test]
fn scripted_full_reference_answer_at_step_one_earns_reward_one() {
    use timewarp::harness::{format_response, ScriptedAgent};
    let tasks = bundled_tasks();
    let task = tasks.iter().find(|t| t.goal_id == "shop-count-soundbar").unwrap();
    let backends = bundled_backends();
    let raw = format_response(
        "The answer is already known.",
        "1. Answer immediately.",
        1,
        "Nothing to remember.",
        "send_msg_to_user('Two')",
    );
    let mut agent = ScriptedAgent::new("oneshot", vec![raw]);
    let instance = TaskInstance { task: task.clone(), version: Version::V6 };
    let trajectory = run_episode(
        &instance,
        &backends,
        &mut agent,
        &JudgeBackend::RuleBased,
        &EpisodeConfig::default(),
    )
    .unwrap();
    assert_eq!(trajectory.steps.len(), 1);
    assert_eq!(trajectory.reward, 1);
}

#[test]
fn garbage_agent_runs_to_max_steps_with_reward_zero() {
    use timewarp::harness::ScriptedAgent;
    let tasks = bundled_tasks();
    let task = tasks.iter().find(|t| t.goal_id == "wiki-fact-everest").unwrap();
    let backends = bundled_backends();
    let mut agent = ScriptedAgent::new(
        "garbage",
        std::iter::repeat("I have no idea what to do".to_string()).take(40).collect(),
    );
    let config = EpisodeConfig { max_steps: 5, ..Default::default() };
    let instance = TaskInstance { task: task.clone(), version: Version::V2 };
    let trajectory = run_episode(
        &instance,
        &backends,
        &mut agent,
        &JudgeBackend::RuleBased,
        &config,
    )
    .unwrap();
    assert_eq!(trajectory.steps.len(), 5);
    assert_eq!(trajectory.reward, 0);
    assert!(trajectory.steps.iter().all(|s| s.parse_error.is_some()));
    // the error is surfaced to the next prompt
    assert!(trajectory.steps[1].prompt.contains("Your response could not be executed"));
}
