//! Trajectory-success evaluation: three-label verdicts, multi-reference
//! OR/AND logic, the deterministic rule-based matcher, and the remote LLM
//! judge client.

pub mod llm;
pub mod rules;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::taskset::{AnswerFlags, MatchMode};

pub use llm::{judge_prompt, parse_verdict, LlmJudge, LlmJudgeConfig};
pub use rules::rule_based_match;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Label {
    Incorrect,
    PartiallyCorrect,
    Correct,
}

impl Label {
    pub fn name(&self) -> &'static str {
        match self {
            Label::Correct => "correct",
            Label::PartiallyCorrect => "partially correct",
            Label::Incorrect => "incorrect",
        }
    }
}

#[derive(Debug, Error)]
pub enum JudgeError {
    #[error("judge backend unavailable: {0}")]
    BackendUnavailable(String),
    #[error("judge response unparseable after retry: {0:?}")]
    ResponseParse(String),
}

/// Verdict for one candidate answer. Reward is 1 iff the label is `correct`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JudgeVerdict {
    pub label: Label,
    pub reward: u8,
    /// Per-reference labels when match_mode = any.
    pub per_reference: Option<Vec<Label>>,
}

impl JudgeVerdict {
    fn from_label(label: Label, per_reference: Option<Vec<Label>>) -> JudgeVerdict {
        JudgeVerdict {
            label,
            reward: if label == Label::Correct { 1 } else { 0 },
            per_reference,
        }
    }
}

/// A grading backend: rule-based for hermetic runs, remote LLM otherwise.
pub enum JudgeBackend {
    RuleBased,
    Llm(LlmJudge),
}

impl JudgeBackend {
    pub fn from_env_or_rule_based() -> JudgeBackend {
        match LlmJudgeConfig::from_env() {
            Some(config) => match LlmJudge::new(config) {
                Ok(j) => JudgeBackend::Llm(j),
                Err(_) => JudgeBackend::RuleBased,
            },
            None => JudgeBackend::RuleBased,
        }
    }

    fn grade(
        &self,
        goal: &str,
        reference: &str,
        candidate: &str,
        flags: AnswerFlags,
    ) -> Result<Label, JudgeError> {
        match self {
            JudgeBackend::RuleBased => Ok(rule_based_match(reference, candidate, flags)),
            JudgeBackend::Llm(llm) => llm.grade(goal, reference, candidate),
        }
    }
}

/// Grade a candidate against a task's references.
///
/// `any` issues one backend call per reference and succeeds if at least one
/// comes back correct; `all_as_one` concatenates the references into a single
/// string graded in one call.
pub fn judge(
    goal: &str,
    references: &[String],
    match_mode: MatchMode,
    candidate: &str,
    flags: AnswerFlags,
    backend: &JudgeBackend,
) -> Result<JudgeVerdict, JudgeError> {
    match match_mode {
        MatchMode::Any => {
            let mut labels = Vec::with_capacity(references.len());
            for reference in references {
                labels.push(backend.grade(goal, reference, candidate, flags)?);
            }
            let best = labels.iter().copied().max().unwrap_or(Label::Incorrect);
            Ok(JudgeVerdict::from_label(best, Some(labels)))
        }
        MatchMode::AllAsOne => {
            let combined = references.join(", ");
            let label = backend.grade(goal, &combined, candidate, flags)?;
            Ok(JudgeVerdict::from_label(label, None))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn any(refs: &[&str], cand: &str) -> JudgeVerdict {
        let refs: Vec<String> = refs.iter().map(|s| s.to_string()).collect();
        judge(
            "goal",
            &refs,
            MatchMode::Any,
            cand,
            AnswerFlags::default(),
            &JudgeBackend::RuleBased,
        )
        .unwrap()
    }

    #[test]
    fn reward_is_binary_and_tied_to_correct() {
        let v = any(&["Two"], "2");
        assert_eq!(v.label, Label::Correct);
        assert_eq!(v.reward, 1);
        let v = any(&["Two"], "3");
        assert_eq!(v.reward, 0);
        let v = any(&["Eric Adams"], "mayor Eric Adams of NYC");
        assert_eq!(v.label, Label::PartiallyCorrect);
        assert_eq!(v.reward, 0);
    }

    #[test]
    fn or_semantics_accept_any_match() {
        let v = any(&["Alpha", "Beta"], "beta");
        assert_eq!(v.label, Label::Correct);
        assert_eq!(
            v.per_reference,
            Some(vec![Label::Incorrect, Label::Correct])
        );
    }

    #[test]
    fn adding_a_reference_never_flips_correct_away() {
        let base = any(&["Beta"], "beta");
        assert_eq!(base.label, Label::Correct);
        let more = any(&["Beta", "Gamma", "Delta"], "beta");
        assert_eq!(more.label, Label::Correct);
    }

    #[test]
    fn all_as_one_concatenates() {
        let refs: Vec<String> = vec!["B644DDC66C".into(), "1069AE6414".into()];
        let v = judge(
            "order both",
            &refs,
            MatchMode::AllAsOne,
            "B644DDC66C, 1069AE6414",
            AnswerFlags::default(),
            &JudgeBackend::RuleBased,
        )
        .unwrap();
        assert_eq!(v.label, Label::Correct);
        assert!(v.per_reference.is_none());
        let wrong_order = judge(
            "order both",
            &refs,
            MatchMode::AllAsOne,
            "1069AE6414, B644DDC66C",
            AnswerFlags::default(),
            &JudgeBackend::RuleBased,
        )
        .unwrap();
        assert_eq!(wrong_order.label, Label::Incorrect);
    }
}
