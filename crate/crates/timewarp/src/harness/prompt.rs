//! The agent prompt: goal, URL allowlist, observation, response history, the
//! action-space documentation, and formatting examples. In teacher mode an
//! Execution Instructions block carries the refined plan.

use serde::{Deserialize, Serialize};

use crate::env::Observation;

use super::response::AgentResponse;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ObsMode {
    Axt,
    Html,
    Both,
}

impl ObsMode {
    pub fn parse(s: &str) -> Result<ObsMode, String> {
        match s.to_ascii_lowercase().as_str() {
            "axt" => Ok(ObsMode::Axt),
            "html" => Ok(ObsMode::Html),
            "both" => Ok(ObsMode::Both),
            "ss" | "som" | "screenshot" => Err(format!(
                "observation mode '{s}' is visual; only text modes (axt, html, both) are supported"
            )),
            _ => Err(format!("unknown observation mode '{s}'")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SiteUrls {
    pub wiki: String,
    pub news: String,
    pub shop: String,
}

impl SiteUrls {
    /// The kernel-scheme bases used when no HTTP server is involved.
    pub fn kernel() -> SiteUrls {
        SiteUrls {
            wiki: "timewarp://wiki/".into(),
            news: "timewarp://news/".into(),
            shop: "timewarp://shop/".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PromptConfig {
    pub obs_mode: ObsMode,
    pub urls: SiteUrls,
    /// Optional cap on the AXTree/HTML sections, in characters; oversized
    /// sections keep their head and tail around a truncation marker.
    pub truncate_obs_chars: Option<usize>,
}

impl Default for PromptConfig {
    fn default() -> Self {
        PromptConfig {
            obs_mode: ObsMode::Axt,
            urls: SiteUrls::kernel(),
            truncate_obs_chars: None,
        }
    }
}

fn truncate_middle(text: &str, max_chars: Option<usize>) -> String {
    let Some(max) = max_chars else {
        return text.to_string();
    };
    if text.chars().count() <= max || max < 16 {
        return text.to_string();
    }
    let head: String = text.chars().take(max / 2).collect();
    let tail: String = {
        let total = text.chars().count();
        text.chars().skip(total - max / 2).collect()
    };
    format!("{head}\n[... truncated ...]\n{tail}")
}

const ACTION_SPACE_DOC: &str = r#"scroll(delta_x: float, delta_y: float)
    Examples:
        scroll(0, 200)
        scroll(-50.2, -100.5)

fill(bid: str, value: str, enable_autocomplete_menu: bool = False)
    Examples:
        fill('45', 'multi-line\n example')
        fill('a12', 'example with "quotes"')
        fill('b534', 'Montre', True)

click(bid: str, button: Literal['left', 'middle', 'right'] = 'left', modifiers: list[typing.Literal['Alt', 'Control', 'ControlOrMeta', 'Meta', 'Shift']] = [])
    Examples:
        click('a51')
        click('b22', button='right')
        click('48', button='middle', modifiers=['Shift'])

press(bid: str, key_comb: str)
    Examples:
        press('88', 'Backspace')
        press('a26', 'ControlOrMeta+a')
        press('a61', 'Meta+Shift+t')

go_back()
    Examples:
        go_back()

goto(url: str)
    Examples:
        goto('http://www.example.com')

send_msg_to_user(text: str)
    Examples:
        send_msg_to_user('Based on the results of my search, the city was built in 1751.')

report_infeasible(reason: str)
    Examples:
        report_infeasible('I cannot follow these instructions because there is no email field in this form.')

new_tab()
    Examples:
        new_tab()

tab_close()
    Examples:
        tab_close()

tab_focus(index: int)
    Examples:
        tab_focus(2)"#;

const ABSTRACT_EXAMPLE: &str = r#"<think>
Think step by step. If you need to make calculations, such as coordinates, write them here. Describe the effect that your previous action had on the current content of the page.
</think>

<plan>
Provide a multi-step plan that will guide you to accomplish the goal. There should always be steps to verify if the previous action had an effect. The plan can be revisited at each step. Specifically, if there was something unexpected. The plan should be cautious and favor exploring before submitting.
</plan>

<step>Integer specifying the step of the current action.</step>

<memory>
Write down anything you need to remember for the next steps. You will be presented with the list of previous memories and past actions. Some tasks require to remember hints from previous steps in order to solve them.
</memory>

<action>
One single action to be executed. You can only use one action at a time.
</action>"#;

const CONCRETE_EXAMPLE: &str = r#"<think>
From the previous action, I tried to set the value of year to "2022", using select_option, but it doesn't appear to be in the form. It may be a dynamic dropdown. I will try using click with the bid "a324" and look at the response from the page.
</think>

<plan>
1. Fill form (failed)
    - Type first name
    - Type last name
2. Try to activate the form
    - Click on tab 2
3. Fill form again
    - Type first name
    - Type last name
4. Verify and submit
    - Verify form is filled
    - Submit if filled, if not, replan
</plan>

<step>2</step>

<memory>
I clicked on bid "32" to activate tab 2. The accessibility tree should list the form's focusable elements at the next step.
</memory>

<action>
click('a324')
</action>"#;

/// Render the full prompt for one step. `execution_plan` switches on teacher
/// mode; `history` holds all prior responses in order.
pub fn build_prompt(
    goal: &str,
    observation: &Observation,
    history: &[AgentResponse],
    execution_plan: Option<&str>,
    config: &PromptConfig,
) -> String {
    let mut p = String::with_capacity(8192);
    p.push_str(
        "You are an agent trying to solve a web task based on the content of the page and user \
instructions. You can interact with the page and explore, and send messages to the user. Each \
time you submit an action, it will be sent to the browser, and you will receive a new page.\n\n",
    );
    p.push_str(
        "# Instructions:\nReview the current state of the page and all other information to find \
the best possible next action to accomplish your goal. Your answer will be interpreted and \
executed by a program. Make sure to follow the formatting instructions.\n\n",
    );
    p.push_str(&format!("## Goal: {goal}\n\n"));
    p.push_str("## Extra instructions:\n\n");
    p.push_str(
        "IMPORTANT: You must only navigate to URLs within the TimeWarp environment. Do NOT \
navigate to external websites. Only use the URLs provided in the TimeWarp environment.\n\n",
    );
    p.push_str(&format!("- WIKI URL: {}\n", config.urls.wiki));
    p.push_str(&format!("- NEWS URL: {}\n", config.urls.news));
    p.push_str(&format!("- SHOP URL: {}\n\n", config.urls.shop));
    p.push_str(&format!(
        "Example: goto(\"{}\") to navigate to WIKI.\n\n",
        config.urls.wiki
    ));
    p.push_str(
        "CRITICAL:\n- You MUST output EXACTLY ONE action per response. Do NOT attempt multiple \
actions at once.\n- Output the <action> tag ONLY ONCE, at the end of your response, OUTSIDE of \
any <think>, <plan>, <step>, and <memory> tags.\n\n",
    );
    if let Some(plan) = execution_plan {
        p.push_str(
            "# Execution Instructions: Follow these instructions step by step to successfully \
complete the task.\n\n",
        );
        p.push_str(plan.trim_end());
        p.push_str("\n\n");
    }

    p.push_str("# Observation of current step:\n\n");
    p.push_str("## Currently open tabs:\n\n");
    for tab in &observation.tabs {
        let marker = if tab.active { "active" } else { "inactive" };
        p.push_str(&format!("Tab {} ({marker} tab):\n", tab.index));
        p.push_str(&format!("  Title: {}\n", tab.title));
        p.push_str(&format!("  URL: {}\n", tab.url));
    }
    p.push('\n');

    if matches!(config.obs_mode, ObsMode::Axt | ObsMode::Both) {
        p.push_str("## AXTree:\n\n");
        p.push_str(
            "Note: [bid] is the unique alpha-numeric identifier at the beginning of lines for \
each element in the AXTree. Always use bid to refer to elements in your actions.\n\n",
        );
        p.push_str(
            "Note: You can only interact with visible elements. If the \"visible\" tag is not \
present, the element is not visible on the page.\n\n",
        );
        p.push_str(&format!(
            "Focused Element: {}\n\n",
            observation.focused_bid.as_deref().unwrap_or("None")
        ));
        p.push_str(&truncate_middle(&observation.axtree_text, config.truncate_obs_chars));
        p.push('\n');
    }
    if matches!(config.obs_mode, ObsMode::Html | ObsMode::Both) {
        p.push_str("## HTML:\n\n");
        p.push_str(&truncate_middle(&observation.html_text, config.truncate_obs_chars));
        p.push('\n');
    }
    p.push_str(&format!(
        "\n## Error from previous action: {}\n\n",
        observation.last_error.as_deref().unwrap_or("None")
    ));

    p.push_str("# History of interaction with the task:\n\n");
    for (i, response) in history.iter().enumerate() {
        p.push_str(&format!("[Step {}]\n", i + 1));
        if !response.think.is_empty() {
            p.push_str(&format!("<think>\n{}\n</think>\n", response.think));
        }
        if !response.plan.is_empty() {
            p.push_str(&format!("<plan>\n{}\n</plan>\n", response.plan));
        }
        p.push_str(&format!("<step>{}</step>\n", response.step));
        if !response.memory.is_empty() {
            p.push_str(&format!("<memory>\n{}\n</memory>\n", response.memory));
        }
        p.push_str(&format!("<action>\n{}\n</action>\n\n", response.action_raw));
    }

    p.push_str("# Action Space:\n\n");
    p.push_str(
        "Note: This action set allows you to interact with your environment. Most of them are \
Python functions executing Playwright code. The primary way of referring to elements in the page \
is through bid, which are specified in your observations.\n\n",
    );
    p.push_str("11 different types of actions are available.\n\n");
    p.push_str(ACTION_SPACE_DOC);
    p.push_str("\n\nOnly a single action can be provided at once. Example: fill('b534', 'Montre', True).\n\n");

    if let Some(last) = history.last() {
        p.push_str(&format!(
            "# Plan: You just executed step {} of the previously proposed plan: {}\n",
            last.step,
            if last.plan.is_empty() { "None" } else { &last.plan }
        ));
        p.push_str(
            "After reviewing the effect of your previous actions, verify if your plan is still \
relevant and update it if necessary.\n\n",
        );
    }

    p.push_str("# Abstract Example:\n\nHere is an abstract version of the answer with a \
description of the content of each tag. Make sure you follow this structure, but replace the \
content with your answer:\n\n");
    p.push_str(ABSTRACT_EXAMPLE);
    p.push_str("\n\n# Concrete Example:\n\nHere is a concrete example of how to format your \
answer. Make sure to follow the template with proper tags:\n\n");
    p.push_str(CONCRETE_EXAMPLE);
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::{Action, Observation, TabSummary};
    use crate::harness::response::parse_response;

    fn obs() -> Observation {
        Observation {
            tabs: vec![TabSummary {
                index: 1,
                active: true,
                title: "HomePage - Wikipedia".into(),
                url: "timewarp://wiki/".into(),
            }],
            focused_bid: None,
            axtree_text: "[5] heading 'HomePage', visible\n".into(),
            html_text: "<html bid=\"1\"></html>".into(),
            last_error: None,
        }
    }

    fn response(step: u32) -> AgentResponse {
        AgentResponse {
            think: format!("thinking {step}"),
            plan: "1. search\n2. answer".into(),
            step,
            memory: format!("memory {step}"),
            action_raw: "click('5')".into(),
            action: Action::click("5"),
            raw: String::new(),
        }
    }

    #[test]
    fn empty_history_renders_no_entries() {
        let p = build_prompt("Find it", &obs(), &[], None, &PromptConfig::default());
        assert!(p.contains("# History of interaction with the task:\n\n# Action Space:"));
        assert!(!p.contains("[Step 1]"));
        assert!(!p.contains("# Plan: You just executed"));
    }

    #[test]
    fn history_embeds_all_prior_responses() {
        let history = vec![response(1), response(2), response(3)];
        let p = build_prompt("Find it", &obs(), &history, None, &PromptConfig::default());
        for i in 1..=3 {
            assert!(p.contains(&format!("[Step {i}]")));
        }
        assert!(p.contains("# Plan: You just executed step 3"));
    }

    #[test]
    fn teacher_mode_inserts_execution_instructions() {
        let p = build_prompt(
            "Find it",
            &obs(),
            &[],
            Some("1. Search for 'Biology'.\n2. Send the message 'Biology' to the user."),
            &PromptConfig::default(),
        );
        assert!(p.contains("# Execution Instructions: Follow these instructions step by step"));
        assert!(p.contains("1. Search for 'Biology'."));
        let zero_shot = build_prompt("Find it", &obs(), &[], None, &PromptConfig::default());
        assert!(!zero_shot.contains("# Execution Instructions"));
    }

    #[test]
    fn axt_mode_omits_html_section() {
        let p = build_prompt("g", &obs(), &[], None, &PromptConfig::default());
        assert!(p.contains("## AXTree:"));
        assert!(!p.contains("## HTML:"));
        let both = PromptConfig { obs_mode: ObsMode::Both, ..Default::default() };
        let p = build_prompt("g", &obs(), &[], None, &both);
        assert!(p.contains("## AXTree:"));
        assert!(p.contains("## HTML:"));
    }

    #[test]
    fn visual_modes_are_rejected() {
        assert!(ObsMode::parse("axt").is_ok());
        assert!(ObsMode::parse("SoM").is_err());
        assert!(ObsMode::parse("ss").is_err());
    }

    #[test]
    fn concrete_example_in_prompt_parses_as_a_response() {
        let parsed = parse_response(CONCRETE_EXAMPLE).unwrap();
        assert_eq!(parsed.step, 2);
        assert_eq!(parsed.action, Action::click("a324"));
    }

    #[test]
    fn truncation_keeps_head_and_tail() {
        let long = "x".repeat(500);
        let t = truncate_middle(&long, Some(100));
        assert!(t.contains("[... truncated ...]"));
        assert!(t.len() < 150);
        assert_eq!(truncate_middle("short", Some(100)), "short");
    }
}
