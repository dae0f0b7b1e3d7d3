//! The episode kernel: sessions, deterministic transitions, observations,
//! and terminal reward wiring.

pub mod action;
pub mod page;
pub mod session;
pub mod url;

use thiserror::Error;

pub use action::{Action, Modifier, MouseButton};
pub use page::{resolve_url, search_target, PageRef, PageState};
pub use session::{
    EnvSession, Observation, StepOutcome, Tab, TabSummary, UiState, DEFAULT_MAX_STEPS,
};
pub use url::{parse_url, SiteUrl};

use crate::judge::JudgeVerdict;

/// Hard API misuse, as opposed to in-band action failures.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum EnvApiError {
    #[error("unknown task: {0}")]
    UnknownTask(String),
    #[error("unknown version: {0}")]
    UnknownVersion(String),
    #[error("episode already terminated")]
    AlreadyTerminated,
    #[error("episode not terminated")]
    NotTerminated,
}

/// Action failures recorded on the observation; the page is left unchanged.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StepError {
    #[error("Element with bid '{0}' was not found on the page")]
    ElementNotFound(String),
    #[error("Locator.{verb}: Element is not visible (bid '{bid}')")]
    ElementNotVisible { verb: String, bid: String },
    #[error("Element with bid '{0}' is not interactable")]
    NotInteractable(String),
    #[error("Element with bid '{0}' is blocked by an overlay; dismiss it first")]
    BlockedByOverlay(String),
    #[error("Navigation to '{0}' is not allowed; only URLs within the environment may be visited")]
    DisallowedUrl(String),
    #[error("No tab with index {0}")]
    BadTabIndex(i64),
    #[error("Cannot close the last remaining tab")]
    CannotCloseLastTab,
    #[error("Cannot go back: no previous page in history")]
    NoHistory,
    #[error("Cannot place the order: option '{0}' has not been selected")]
    MissingOption(String),
    #[error("Cannot place the order: {0}")]
    InvalidSelection(String),
    #[error("Your response could not be executed: {0}")]
    InvalidAgentResponse(String),
}

/// Sparse terminal reward: 1 iff the judge found the final message correct.
pub fn final_reward(session: &EnvSession, verdict: &JudgeVerdict) -> Result<u8, EnvApiError> {
    if !session.terminated {
        return Err(EnvApiError::NotTerminated);
    }
    Ok(verdict.reward)
}
