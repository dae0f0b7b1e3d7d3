//! Subcommand implementations: run, collect, build-data, validate, report.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::{mpsc, Mutex};

use anyhow::{bail, Context, Result};
use timewarp::assets;
use timewarp::bc::{build_dataset, export, parse_version_filter, ExportFormat, TokenMask};
use timewarp::harness::{
    report as make_report, Agent, EpisodeConfig, HttpAgent, ObsMode, OracleAgent, PromptConfig,
    ScriptedAgent, Trajectory,
};
use timewarp::judge::JudgeBackend;
use timewarp::sites::Backends;
use timewarp::taskset::{instantiate, load_tasks, Split, TaskInstance, TaskSpec};
use timewarp::traj::{
    distill_plans, ingest_refined, teacher_rollouts, write_plan_files, PlannerBackend,
    RolloutConfig, TeacherBackend, TrajectoryStore,
};
use timewarp::types::Version;

use crate::config::Config;

pub fn load_task_file(path: Option<&Path>) -> Result<Vec<TaskSpec>> {
    match path {
        Some(path) => load_tasks(path).with_context(|| format!("loading tasks from {}", path.display())),
        None => Ok(assets::bundled_tasks()),
    }
}

/// Deterministic in-place shuffle driven by splitmix64.
fn seeded_shuffle<T>(items: &mut [T], seed: u64) {
    let mut state = seed.wrapping_add(0x9E3779B97F4A7C15);
    let mut next = move || {
        state = state.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^ (z >> 31)
    };
    for i in (1..items.len()).rev() {
        let j = (next() % (i as u64 + 1)) as usize;
        items.swap(i, j);
    }
}

/// How `--agent` strings resolve: `scripted:oracle` (bundled plans),
/// `scripted:FILE` (canned responses keyed by goal_id), or a base URL.
pub enum AgentSpec {
    Oracle,
    Scripted(BTreeMap<String, Vec<String>>),
    Http { base_url: String, model: String },
}

impl AgentSpec {
    pub fn parse(raw: &str, model: Option<&str>) -> Result<AgentSpec> {
        if raw == "scripted:oracle" || raw == "oracle" {
            return Ok(AgentSpec::Oracle);
        }
        if let Some(path) = raw.strip_prefix("scripted:") {
            let raw = std::fs::read_to_string(path)
                .with_context(|| format!("loading scripted agent file {path}"))?;
            let map: BTreeMap<String, Vec<String>> =
                serde_json::from_str(&raw).context("scripted agent file must map goal_id to a response list")?;
            return Ok(AgentSpec::Scripted(map));
        }
        if raw.starts_with("http://") || raw.starts_with("https://") {
            return Ok(AgentSpec::Http {
                base_url: raw.to_string(),
                model: model.unwrap_or("default").to_string(),
            });
        }
        bail!("unrecognized agent spec {raw:?}; use a URL, scripted:FILE, or scripted:oracle")
    }

    fn make(&self, instance: &TaskInstance) -> Result<Box<dyn Agent>> {
        Ok(match self {
            AgentSpec::Oracle => {
                let plan = assets::bundled_plan(&instance.task.goal_id).with_context(|| {
                    format!("no bundled plan for goal {}", instance.task.goal_id)
                })?;
                Box::new(OracleAgent::new(&instance.task.goal_id, plan))
            }
            AgentSpec::Scripted(map) => Box::new(ScriptedAgent::new(
                &instance.task.goal_id,
                map.get(&instance.task.goal_id).cloned().unwrap_or_default(),
            )),
            AgentSpec::Http { base_url, model } => Box::new(
                HttpAgent::new(
                    base_url,
                    model,
                    std::env::var("AGENT_KEY").ok(),
                    std::time::Duration::from_secs(120),
                )
                .map_err(|e| anyhow::anyhow!(e.to_string()))?,
            ),
        })
    }

    /// The oracle needs its plan injected as execution instructions.
    fn execution_plan(&self, instance: &TaskInstance) -> Option<String> {
        match self {
            AgentSpec::Oracle => assets::bundled_plan(&instance.task.goal_id).map(str::to_string),
            _ => None,
        }
    }
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_run(
    config: &Config,
    tasks_path: Option<&Path>,
    versions: &str,
    agent_raw: &str,
    obs: &str,
    judge_flag: Option<&str>,
    out_dir: Option<&Path>,
    seeds: u64,
    seed_base: u64,
) -> Result<()> {
    let backends = config.backends()?;
    let tasks = load_task_file(tasks_path)?;
    let versions = Version::parse_set(versions).map_err(|e| anyhow::anyhow!(e.to_string()))?;
    let obs_mode = ObsMode::parse(obs).map_err(|e| anyhow::anyhow!(e))?;
    let agent_spec = AgentSpec::parse(agent_raw, config.agent.model.as_deref())?;
    let judge = config.judge_backend(judge_flag)?;

    let mut trajectories: Vec<Trajectory> = Vec::new();
    for seed_offset in 0..seeds.max(1) {
        let seed = seed_base + seed_offset;
        let mut instances = instantiate(&tasks, &versions);
        seeded_shuffle(&mut instances, seed);
        let batch = run_batch(
            &backends,
            &instances,
            &agent_spec,
            &judge,
            obs_mode,
            config.run.max_steps,
            config.run.parallelism,
            seed,
        )?;
        trajectories.extend(batch);
    }

    if let Some(dir) = out_dir {
        std::fs::create_dir_all(dir)?;
        let store = TrajectoryStore::create(dir)?;
        let mut ids = Vec::new();
        for t in &trajectories {
            store.save(t)?;
            ids.push(t.id());
        }
        ids.sort();
        ids.dedup();
        let report = make_report(&trajectories);
        std::fs::write(dir.join("report.json"), serde_json::to_string_pretty(&report)?)?;
        std::fs::write(dir.join("report.txt"), report.render_text())?;
    }
    let summary = make_report(&trajectories);
    println!("{}", summary.render_text());
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn run_batch(
    backends: &Backends,
    instances: &[TaskInstance],
    agent_spec: &AgentSpec,
    judge: &JudgeBackend,
    obs_mode: ObsMode,
    max_steps: usize,
    parallelism: usize,
    seed: u64,
) -> Result<Vec<Trajectory>> {
    let queue = Mutex::new(instances.iter().cloned());
    let (tx, rx) = mpsc::channel::<Result<Trajectory>>();
    let workers = parallelism.max(1);
    std::thread::scope(|scope| {
        for _ in 0..workers {
            let tx = tx.clone();
            let queue = &queue;
            scope.spawn(move || loop {
                let job = queue.lock().unwrap().next();
                let Some(instance) = job else { break };
                let result = (|| -> Result<Trajectory> {
                    let mut agent = agent_spec.make(&instance)?;
                    let episode = EpisodeConfig {
                        max_steps,
                        prompt: PromptConfig { obs_mode, ..Default::default() },
                        execution_plan: agent_spec.execution_plan(&instance),
                        seed,
                    };
                    timewarp::harness::run_episode(
                        &instance,
                        backends,
                        agent.as_mut(),
                        judge,
                        &episode,
                    )
                    .map_err(|e| anyhow::anyhow!("{}: {e}", instance.id()))
                })();
                if tx.send(result).is_err() {
                    break;
                }
            });
        }
        drop(tx);
        let mut out = Vec::new();
        for result in rx.iter() {
            out.push(result?);
        }
        // deterministic ordering regardless of worker interleaving
        out.sort_by_key(|t| (t.id(), t.meta.seed));
        Ok(out)
    })
}

pub fn cmd_collect_plans(
    config: &Config,
    goals_path: Option<&Path>,
    planner: &str,
    out_dir: &Path,
) -> Result<()> {
    let goals = load_task_file(goals_path)?;
    let backend = match planner {
        "manual" => PlannerBackend::Manual,
        "bundled" => PlannerBackend::Scripted(assets::bundled_plans()),
        url if url.starts_with("http") => PlannerBackend::Http(timewarp::net::ChatClient::new(
            url,
            config.agent.model.clone().unwrap_or_else(|| "default".into()),
            std::env::var("AGENT_KEY").ok(),
            std::time::Duration::from_secs(120),
        )
        .map_err(|e| anyhow::anyhow!(e))?),
        other => bail!("unknown planner {other:?}; use manual, bundled, or a URL"),
    };
    let records = distill_plans(&goals, &backend)?;
    write_plan_files(&records, out_dir)?;
    println!("wrote {} draft plan(s) to {}", records.len(), out_dir.display());
    Ok(())
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_collect_rollout(
    config: &Config,
    goals_path: Option<&Path>,
    plans_dir: Option<&Path>,
    versions: &str,
    teacher_raw: &str,
    judge_flag: Option<&str>,
    out_dir: &Path,
    seed: u64,
) -> Result<()> {
    let backends = config.backends()?;
    let goals = load_task_file(goals_path)?;
    let versions = Version::parse_set(versions).map_err(|e| anyhow::anyhow!(e.to_string()))?;
    let judge = config.judge_backend(judge_flag)?;

    let plans = match plans_dir {
        Some(dir) => ingest_refined(dir)?,
        None => {
            // bundled plans act as already-refined records
            let bundled = assets::bundled_plans();
            goals
                .iter()
                .filter_map(|g| {
                    bundled.get(&g.goal_id).map(|p| timewarp::traj::PlanRecord {
                        goal_id: g.goal_id.clone(),
                        draft_plan: p.clone(),
                        refined_plan: Some(p.clone()),
                        status: timewarp::traj::PlanStatus::Refined,
                    })
                })
                .collect()
        }
    };

    let teacher = match teacher_raw {
        "scripted:oracle" | "oracle" => TeacherBackend::Oracle,
        url if url.starts_with("http") => TeacherBackend::Http {
            base_url: url.to_string(),
            model: config.agent.model.clone().unwrap_or_else(|| "default".into()),
            api_key: std::env::var("AGENT_KEY").ok(),
        },
        spec if spec.starts_with("scripted:") => {
            let path = spec.strip_prefix("scripted:").unwrap();
            let raw = std::fs::read_to_string(path)?;
            TeacherBackend::Scripted(serde_json::from_str(&raw)?)
        }
        other => bail!("unknown teacher {other:?}"),
    };

    let store = TrajectoryStore::create(out_dir)?;
    let summary = teacher_rollouts(
        &goals,
        &plans,
        &versions,
        &teacher,
        &judge,
        &backends,
        &store,
        &RolloutConfig {
            max_steps: config.run.max_steps,
            parallelism: config.run.parallelism,
            seed,
            ..Default::default()
        },
    )?;
    println!(
        "attempted {} rollouts: kept {}, dropped {}",
        summary.attempted, summary.kept, summary.dropped
    );
    Ok(())
}

pub fn cmd_build_data(
    store_dir: &Path,
    mask: &str,
    versions: &str,
    split: Option<&str>,
    out: &Path,
    format: &str,
) -> Result<()> {
    let store = TrajectoryStore::open(store_dir)?;
    let trajectories = store.load_all()?;
    let mask = TokenMask::parse(mask)
        .with_context(|| format!("unknown mask {mask:?}; use a, ac, ap, am, acp, acm, apm, or acpm"))?;
    let version_set = parse_version_filter(versions)?;
    let split = match split {
        Some("train") => Some(Split::Train),
        Some("test") => Some(Split::Test),
        Some(other) => bail!("unknown split {other:?}"),
        None => None,
    };
    let records = build_dataset(&trajectories, mask, &version_set, split)?;
    let manifest = export(&records, out, ExportFormat::parse(format)?, versions, split)?;
    println!(
        "wrote {} record(s) to {} (mask {}, hash {})",
        manifest.count,
        out.display(),
        manifest.mask_signature,
        &manifest.content_hash[..12]
    );
    Ok(())
}

pub fn cmd_validate(tasks_path: Option<&Path>, manifest_path: Option<&Path>) -> Result<()> {
    let tasks = load_task_file(tasks_path)?;
    let computed = timewarp::taskset::manifest_of(&tasks, &Version::ALL);
    let expected = match manifest_path {
        Some(path) => {
            let raw = std::fs::read_to_string(path)?;
            Some(serde_json::from_str::<timewarp::taskset::TaskManifest>(&raw)?)
        }
        None if tasks_path.is_none() => Some(assets::bundled_manifest()),
        None => None,
    };
    println!(
        "{} goal(s), {} instance(s) over 6 versions",
        computed.goals, computed.instances
    );
    if let Some(expected) = expected {
        if computed != expected {
            bail!(
                "manifest mismatch: expected {expected:?}, computed {computed:?}"
            );
        }
        println!("manifest totals match");
    }
    Ok(())
}

pub fn cmd_report(in_dir: &Path) -> Result<()> {
    let store = TrajectoryStore::open(in_dir)?;
    let trajectories = store.load_all()?;
    if trajectories.is_empty() {
        bail!("no trajectories found in {}", in_dir.display());
    }
    let summary = make_report(&trajectories);
    println!("{}", summary.render_text());
    Ok(())
}
