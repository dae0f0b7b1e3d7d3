//! Agent backends: a chat-completion HTTP client, a canned-response replay
//! agent for hermetic tests, and the plan-following oracle in
//! [`super::oracle`].

use std::time::Duration;

use thiserror::Error;

use crate::net::ChatClient;

#[derive(Debug, Error)]
pub enum AgentError {
    #[error("agent backend unavailable: {0}")]
    BackendUnavailable(String),
}

pub trait Agent {
    fn respond(&mut self, prompt: &str) -> Result<String, AgentError>;

    /// Identifier recorded in trajectory metadata.
    fn id(&self) -> String;
}

/// Remote model speaking the chat-completion protocol.
pub struct HttpAgent {
    client: ChatClient,
}

impl HttpAgent {
    pub fn new(
        base_url: &str,
        model: &str,
        api_key: Option<String>,
        timeout: Duration,
    ) -> Result<HttpAgent, AgentError> {
        let client = ChatClient::new(base_url, model, api_key, timeout)
            .map_err(AgentError::BackendUnavailable)?;
        Ok(HttpAgent { client })
    }
}

impl Agent for HttpAgent {
    fn respond(&mut self, prompt: &str) -> Result<String, AgentError> {
        self.client.complete(prompt).map_err(AgentError::BackendUnavailable)
    }

    fn id(&self) -> String {
        format!("http:{}", self.client.model)
    }
}

/// Replays a fixed sequence of raw responses, one per step.
pub struct ScriptedAgent {
    name: String,
    responses: Vec<String>,
    cursor: usize,
}

impl ScriptedAgent {
    pub fn new(name: impl Into<String>, responses: Vec<String>) -> ScriptedAgent {
        ScriptedAgent {
            name: name.into(),
            responses,
            cursor: 0,
        }
    }
}

impl Agent for ScriptedAgent {
    fn respond(&mut self, _prompt: &str) -> Result<String, AgentError> {
        match self.responses.get(self.cursor) {
            Some(response) => {
                self.cursor += 1;
                Ok(response.clone())
            }
            None => Err(AgentError::BackendUnavailable(format!(
                "scripted agent {} ran out of responses after {}",
                self.name, self.cursor
            ))),
        }
    }

    fn id(&self) -> String {
        format!("scripted:{}", self.name)
    }
}
