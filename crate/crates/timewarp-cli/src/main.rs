//! Command-line front end: serve the sites over HTTP, run benchmark
//! episodes, collect teacher trajectories, build training data, validate
//! task files, and report success rates.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use timewarp_cli::config::Config;
use timewarp_cli::{commands, server};

#[derive(Parser)]
#[command(name = "timewarp", version, about = "Multi-version web environment and trajectory tooling")]
struct Cli {
    /// TOML configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Base seed for any seeded choice (task ordering).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Serve all sites and versions over HTTP under /v{1..6}/{site}/.
    Serve {
        #[arg(long)]
        host: Option<String>,
        #[arg(long)]
        port: Option<u16>,
    },
    /// Run benchmark episodes and print the success table.
    Run {
        /// Task file (JSON Lines); the bundled set when omitted.
        #[arg(long)]
        tasks: Option<PathBuf>,
        /// Version set: all, v6, v1:6, or a comma list.
        #[arg(long, default_value = "all")]
        versions: String,
        /// Agent: a chat-completion base URL, scripted:FILE, or scripted:oracle.
        #[arg(long)]
        agent: String,
        /// Observation mode: axt, html, or both.
        #[arg(long, default_value = "axt")]
        obs: String,
        /// Judge backend: rule or llm.
        #[arg(long)]
        judge: Option<String>,
        /// Directory for per-trajectory records and the aggregate report.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Number of seeded repetitions.
        #[arg(long, default_value_t = 1)]
        seeds: u64,
    },
    /// Trajectory collection: draft plans or teacher rollouts.
    Collect {
        #[command(subcommand)]
        what: CollectCommand,
    },
    /// Build behavior-cloning records from a trajectory store.
    BuildData {
        #[arg(long)]
        store: PathBuf,
        /// Token mask signature: a, ac, ap, am, acp, acm, apm, acpm.
        #[arg(long, default_value = "acpm")]
        mask: String,
        #[arg(long, default_value = "all")]
        versions: String,
        /// Restrict to one split: train or test.
        #[arg(long)]
        split: Option<String>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value = "jsonl")]
        format: String,
    },
    /// Validate a task file (and manifest) without running anything.
    Validate {
        #[arg(long)]
        tasks: Option<PathBuf>,
        #[arg(long)]
        manifest: Option<PathBuf>,
    },
    /// Aggregate success rates from stored trajectories.
    Report {
        #[arg(long, name = "in")]
        in_dir: PathBuf,
    },
}

#[derive(Subcommand)]
enum CollectCommand {
    /// Generate draft execution plans for human refinement.
    Plans {
        #[arg(long)]
        goals: Option<PathBuf>,
        /// Planner: manual, bundled, or a chat-completion base URL.
        #[arg(long, default_value = "bundled")]
        planner: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Execute refined plans with a teacher on every version.
    Rollout {
        #[arg(long)]
        goals: Option<PathBuf>,
        /// Directory of refined .plan files; bundled plans when omitted.
        #[arg(long)]
        plans: Option<PathBuf>,
        #[arg(long, default_value = "all")]
        versions: String,
        /// Teacher: scripted:oracle, scripted:FILE, or a base URL.
        #[arg(long, default_value = "scripted:oracle")]
        teacher: String,
        #[arg(long)]
        judge: Option<String>,
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let config = Config::load(cli.config.as_deref())?;
    match cli.command {
        Command::Serve { host, port } => {
            let backends = config.backends()?;
            let host = host.unwrap_or_else(|| config.server.host.clone());
            let port = port.unwrap_or(config.server.port);
            tokio::runtime::Builder::new_multi_thread()
                .enable_all()
                .build()?
                .block_on(server::serve(backends, &host, port))
        }
        Command::Run { tasks, versions, agent, obs, judge, out, seeds } => commands::cmd_run(
            &config,
            tasks.as_deref(),
            &versions,
            &agent,
            &obs,
            judge.as_deref(),
            out.as_deref(),
            seeds,
            cli.seed,
        ),
        Command::Collect { what } => match what {
            CollectCommand::Plans { goals, planner, out } => {
                commands::cmd_collect_plans(&config, goals.as_deref(), &planner, &out)
            }
            CollectCommand::Rollout { goals, plans, versions, teacher, judge, out } => {
                commands::cmd_collect_rollout(
                    &config,
                    goals.as_deref(),
                    plans.as_deref(),
                    &versions,
                    &teacher,
                    judge.as_deref(),
                    &out,
                    cli.seed,
                )
            }
        },
        Command::BuildData { store, mask, versions, split, out, format } => {
            commands::cmd_build_data(&store, &mask, &versions, split.as_deref(), &out, &format)
        }
        Command::Validate { tasks, manifest } => {
            commands::cmd_validate(tasks.as_deref(), manifest.as_deref())
        }
        Command::Report { in_dir } => commands::cmd_report(&in_dir),
    }
}
