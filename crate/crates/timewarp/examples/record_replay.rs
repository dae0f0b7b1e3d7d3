//! Regenerate the replay fixtures under `assets/replay/`: runs the bundled
//! oracle over a spread of (task, version) pairs and records each action
//! sequence, one serialized action per line.
//!
//! Usage: cargo run -p timewarp --example record_replay

use std::path::PathBuf;

use timewarp::assets::{bundled_backends, bundled_plan, bundled_tasks};
use timewarp::harness::{run_episode, EpisodeConfig, OracleAgent};
use timewarp::judge::JudgeBackend;
use timewarp::taskset::TaskInstance;
use timewarp::types::Version;

fn main() {
    let out_dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../assets/replay");
    std::fs::create_dir_all(&out_dir).expect("create replay dir");

    // one goal per site across all six versions, plus two multi-site runs
    let mut picks: Vec<(&str, Version)> = Vec::new();
    for version in Version::ALL {
        picks.push(("wiki-recursive-chain", version));
        picks.push(("news-compare-football", version));
        picks.push(("shop-order-lamp", version));
    }
    picks.push(("multi-select-nuts", Version::V1));
    picks.push(("multi-order-radio", Version::V5));

    let backends = bundled_backends();
    let tasks = bundled_tasks();
    for (goal_id, version) in picks {
        let task = tasks.iter().find(|t| t.goal_id == goal_id).expect("bundled goal");
        let plan = bundled_plan(goal_id).expect("bundled plan");
        let mut agent = OracleAgent::new(goal_id, plan);
        let config = EpisodeConfig {
            execution_plan: Some(plan.to_string()),
            ..Default::default()
        };
        let instance = TaskInstance { task: task.clone(), version };
        let trajectory = run_episode(&instance, &backends, &mut agent, &JudgeBackend::RuleBased, &config)
            .expect("episode runs");
        assert_eq!(trajectory.reward, 1, "{goal_id}@{version} must succeed to record");
        let lines: Vec<String> = trajectory
            .steps
            .iter()
            .filter_map(|s| s.parsed.as_ref().map(|p| p.action.to_string()))
            .collect();
        let path = out_dir.join(format!("{goal_id}@{version}.actions"));
        std::fs::write(&path, format!("{}\n", lines.join("\n"))).expect("write script");
        println!("{} ({} actions)", path.display(), lines.len());
    }
}
