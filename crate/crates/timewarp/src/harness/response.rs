//! Parsing and rendering of tagged agent responses: the
//! think/plan/step/memory blocks plus exactly one action block.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::env::Action;

use super::action_parser::{parse_action, ActionParseError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ResponseError {
    #[error("response contains no <action> block")]
    NoAction,
    #[error("response contains {0} <action> blocks; exactly one is allowed")]
    MultipleActions(usize),
    #[error("malformed <{0}> tag")]
    MalformedTag(String),
    #[error(transparent)]
    Action(#[from] ActionParseError),
}

/// One parsed agent step: the 4-tuple plus the step index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgentResponse {
    pub think: String,
    pub plan: String,
    pub step: u32,
    pub memory: String,
    pub action_raw: String,
    pub action: Action,
    pub raw: String,
}

/// Extract every body of `<tag>...</tag>` in order.
fn extract_all<'a>(raw: &'a str, tag: &str) -> Result<Vec<&'a str>, ResponseError> {
    let open = format!("<{tag}>");
    let close = format!("</{tag}>");
    let mut out = Vec::new();
    let mut rest = raw;
    while let Some(start) = rest.find(&open) {
        let after = &rest[start + open.len()..];
        let Some(end) = after.find(&close) else {
            return Err(ResponseError::MalformedTag(tag.to_string()));
        };
        out.push(&after[..end]);
        rest = &after[end + close.len()..];
    }
    Ok(out)
}

fn extract_one(raw: &str, tag: &str) -> Result<Option<String>, ResponseError> {
    Ok(extract_all(raw, tag)?.first().map(|s| s.trim().to_string()))
}

/// Parse a raw model response. Missing think/plan/memory default to empty;
/// a missing step defaults to 1. Zero or multiple action blocks are errors.
pub fn parse_response(raw: &str) -> Result<AgentResponse, ResponseError> {
    let actions = extract_all(raw, "action")?;
    match actions.len() {
        0 => return Err(ResponseError::NoAction),
        1 => {}
        n => return Err(ResponseError::MultipleActions(n)),
    }
    let action_raw = actions[0].trim().to_string();
    let action = parse_action(&action_raw)?;
    let step = match extract_one(raw, "step")? {
        Some(text) if !text.is_empty() => text
            .parse::<u32>()
            .ok()
            .filter(|s| *s >= 1)
            .ok_or_else(|| ResponseError::MalformedTag("step".to_string()))?,
        _ => 1,
    };
    Ok(AgentResponse {
        think: extract_one(raw, "think")?.unwrap_or_default(),
        plan: extract_one(raw, "plan")?.unwrap_or_default(),
        step,
        memory: extract_one(raw, "memory")?.unwrap_or_default(),
        action_raw,
        action,
        raw: raw.to_string(),
    })
}

/// Canonical rendering: think, plan, step, memory, action. Scripted teachers
/// emit exactly this form, so stored responses re-render byte-identically.
pub fn format_response(think: &str, plan: &str, step: u32, memory: &str, action: &str) -> String {
    format!(
        "<think>\n{think}\n</think>\n\n<plan>\n{plan}\n</plan>\n\n<step>{step}</step>\n\n<memory>\n{memory}\n</memory>\n\n<action>\n{action}\n</action>"
    )
}
