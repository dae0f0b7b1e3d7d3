//! Remote LLM judge client: renders the judge prompt, calls a
//! chat-completion endpoint, and parses the single-word verdict.

use std::sync::{Condvar, Mutex};
use std::time::Duration;

use serde::Deserialize;
use serde_json::json;

use super::{JudgeError, Label};

/// The judge prompt with its three substitution slots filled in.
pub fn judge_prompt(goal: &str, reference: &str, candidate: &str) -> String {
    format!(
        "Help a teacher grade the answer of a student given a question. Keep in mind that the \
student may use different phrasing or wording to answer the question. The goal is to evaluate \
whether the answer is semantically equivalent to the reference answer.\n\n\
#Input:\n\
- question: {goal}\n\
- reference answer: {reference}\n\
- student answer: {candidate}\n\n\
# Special Sequence: The string 'N/A' that you see is a special sequence that means 'not achievable'.\n\n\
# Output: You must respond with EXACTLY one of the following words (nothing else):\n\
1. 'correct': If the answer is semantically equivalent to the reference.\n\
   - Numeric values must match exactly (including units, signs, and scale) unless the \
question/reference clearly allows an approximation or rounding.\n\
   - If an estimate is allowed, the student must still be reasonably close and not contradict the reference.\n\
   - Ordered lists/steps/rankings must match exactly in both the elements' values and order.\n\
   - Unordered lists/sets must contain the same elements; the order of the elements does not matter.\n\
   - Extra information is allowed only if it does not contradict or change the meaning.\n\
2. 'partially correct': If the answer is somewhat related but incomplete or inaccurate.\n\
3. 'incorrect': If the answer is wrong or unrelated.\n\n\
Do not include any additional text, explanation, or formatting. Only respond with one of the three words above."
    )
}

/// Normalize a model reply down to one of the three verdict words.
pub fn parse_verdict(raw: &str) -> Option<Label> {
    let cleaned: String = raw
        .to_lowercase()
        .chars()
        .map(|c| if c.is_alphanumeric() { c } else { ' ' })
        .collect();
    let cleaned = cleaned.split_whitespace().collect::<Vec<_>>().join(" ");
    match cleaned.as_str() {
        "correct" => Some(Label::Correct),
        "partially correct" => Some(Label::PartiallyCorrect),
        "incorrect" => Some(Label::Incorrect),
        _ => None,
    }
}

#[derive(Debug, Clone)]
pub struct LlmJudgeConfig {
    /// Base URL of a chat-completion endpoint, e.g. `http://host:port/v1`.
    pub base_url: String,
    pub model: String,
    pub api_key: Option<String>,
    pub timeout: Duration,
    pub max_in_flight: usize,
}

impl LlmJudgeConfig {
    /// Read JUDGE_URL / JUDGE_MODEL / JUDGE_KEY from the environment.
    pub fn from_env() -> Option<LlmJudgeConfig> {
        let base_url = std::env::var("JUDGE_URL").ok()?;
        let model = std::env::var("JUDGE_MODEL").unwrap_or_else(|_| "default".to_string());
        Some(LlmJudgeConfig {
            base_url,
            model,
            api_key: std::env::var("JUDGE_KEY").ok(),
            timeout: Duration::from_secs(60),
            max_in_flight: 4,
        })
    }
}

/// Counting semaphore capping concurrent backend calls.
struct InFlight {
    slots: Mutex<usize>,
    freed: Condvar,
}

impl InFlight {
    fn new(max: usize) -> InFlight {
        InFlight {
            slots: Mutex::new(max.max(1)),
            freed: Condvar::new(),
        }
    }

    fn acquire(&self) {
        let mut slots = self.slots.lock().unwrap();
        while *slots == 0 {
            slots = self.freed.wait(slots).unwrap();
        }
        *slots -= 1;
    }

    fn release(&self) {
        *self.slots.lock().unwrap() += 1;
        self.freed.notify_one();
    }
}

pub struct LlmJudge {
    config: LlmJudgeConfig,
    client: reqwest::blocking::Client,
    in_flight: InFlight,
}

#[derive(Deserialize)]
struct ChatResponse {
    choices: Vec<ChatChoice>,
}

#[derive(Deserialize)]
struct ChatChoice {
    message: ChatMessage,
}

#[derive(Deserialize)]
struct ChatMessage {
    content: String,
}

impl LlmJudge {
    pub fn new(config: LlmJudgeConfig) -> Result<LlmJudge, JudgeError> {
        let client = reqwest::blocking::Client::builder()
            .timeout(config.timeout)
            .build()
            .map_err(|e| JudgeError::BackendUnavailable(e.to_string()))?;
        let in_flight = InFlight::new(config.max_in_flight);
        Ok(LlmJudge { config, client, in_flight })
    }

    fn call_once(&self, prompt: &str) -> Result<String, JudgeError> {
        let url = format!("{}/chat/completions", self.config.base_url.trim_end_matches('/'));
        let body = json!({
            "model": self.config.model,
            "messages": [{"role": "user", "content": prompt}],
            "temperature": 0,
        });
        let mut request = self.client.post(&url).json(&body);
        if let Some(key) = &self.config.api_key {
            request = request.bearer_auth(key);
        }
        self.in_flight.acquire();
        let result = request.send();
        self.in_flight.release();
        let response = result.map_err(|e| JudgeError::BackendUnavailable(e.to_string()))?;
        if !response.status().is_success() {
            return Err(JudgeError::BackendUnavailable(format!(
                "judge endpoint returned {}",
                response.status()
            )));
        }
        let parsed: ChatResponse = response
            .json()
            .map_err(|e| JudgeError::BackendUnavailable(e.to_string()))?;
        parsed
            .choices
            .first()
            .map(|c| c.message.content.clone())
            .ok_or_else(|| JudgeError::BackendUnavailable("empty choices".to_string()))
    }

    /// One graded call; an unparseable reply is retried once.
    pub fn grade(&self, goal: &str, reference: &str, candidate: &str) -> Result<Label, JudgeError> {
        let prompt = judge_prompt(goal, reference, candidate);
        let first = self.call_once(&prompt)?;
        if let Some(label) = parse_verdict(&first) {
            return Ok(label);
        }
        let second = self.call_once(&prompt)?;
        parse_verdict(&second).ok_or(JudgeError::ResponseParse(second))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_parsing_normalizes_case_and_punctuation() {
        assert_eq!(parse_verdict("correct"), Some(Label::Correct));
        assert_eq!(parse_verdict("CORRECT."), Some(Label::Correct));
        assert_eq!(parse_verdict(" Partially  Correct\n"), Some(Label::PartiallyCorrect));
        assert_eq!(parse_verdict("incorrect!"), Some(Label::Incorrect));
        assert_eq!(parse_verdict("The answer is correct because..."), None);
        assert_eq!(parse_verdict(""), None);
    }

    #[test]
    fn prompt_carries_all_three_slots() {
        let p = judge_prompt("How many?", "Two", "2");
        assert!(p.contains("question: How many?"));
        assert!(p.contains("reference answer: Two"));
        assert!(p.contains("student answer: 2"));
        assert!(p.contains("EXACTLY one of the following words"));
    }
}
