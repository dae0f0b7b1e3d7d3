//! The agent-facing loop: prompt assembly, response parsing, the action DSL,
//! episode running, and success reporting.

pub mod action_parser;
pub mod agents;
pub mod episode;
pub mod oracle;
pub mod prompt;
pub mod report;
pub mod response;

pub use action_parser::{parse_action, ActionParseError};
pub use agents::{Agent, AgentError, HttpAgent, ScriptedAgent};
pub use episode::{
    run_episode, EpisodeConfig, EpisodeError, Trajectory, TrajectoryMeta, TrajectoryStep,
};
pub use oracle::OracleAgent;
pub use prompt::{build_prompt, ObsMode, PromptConfig, SiteUrls};
pub use report::{report, ReportCell, SuccessReport};
pub use response::{format_response, parse_response, AgentResponse, ResponseError};
