//! A deterministic teacher that executes a version-independent plan by
//! reading the observation out of its prompt, exactly like a remote agent
//! would. Plan checkpoints compile into directives; built-in reflexes handle
//! version quirks (popup ads, icon-gated search, below-the-fold search boxes)
//! so one plan drives all six versions.

use crate::dom::{parse_axtree, AxLine};

use super::agents::{Agent, AgentError};
use super::response::format_response;

const SCROLL_STEP_PX: f64 = 800.0;

#[derive(Debug, Clone, PartialEq)]
enum Directive {
    Goto(String),
    Search(String),
    OpenLink(String),
    OpenResult(usize),
    SelectOption { name: String, value: String },
    Buy,
    NextPage,
    ReadCode,
    Answer(String),
    AnswerCode,
    /// Human-flavored verification steps that need no browser action.
    Note(String),
}

/// Pull the quoted fragment out of a checkpoint line, accepting ' and ".
fn quoted(text: &str) -> Option<String> {
    for quote in ['\'', '"'] {
        if let Some(start) = text.find(quote) {
            if let Some(len) = text[start + 1..].find(quote) {
                return Some(text[start + 1..start + 1 + len].to_string());
            }
        }
    }
    None
}

fn compile_checkpoint(text: &str) -> Vec<Directive> {
    let lower = text.to_lowercase();
    if lower.contains("go to") || lower.contains("navigate to") {
        for site in ["wiki", "news", "shop"] {
            if lower.contains(&format!("{site} site")) || lower.contains(&format!("the {site}")) {
                return vec![Directive::Goto(site.to_string())];
            }
        }
    }
    if lower.starts_with("search for") || lower.contains(". search for") || lower.contains("type") && lower.contains("search box") {
        if let Some(q) = quoted(text) {
            return vec![Directive::Search(q)];
        }
    }
    if lower.contains("open result") || lower.contains("open the first result") {
        let n = lower
            .split_whitespace()
            .find_map(|w| w.trim_matches(|c: char| !c.is_ascii_digit()).parse::<usize>().ok())
            .unwrap_or(1);
        return vec![Directive::OpenResult(n.max(1))];
    }
    if lower.contains("open the") && lower.contains("link") || lower.contains("open the article") || lower.contains("open the product") {
        if let Some(t) = quoted(text) {
            return vec![Directive::OpenLink(t)];
        }
    }
    if lower.starts_with("select ") || lower.contains(". select ") {
        if let Some(value) = quoted(text) {
            let name = text
                .split("elect ")
                .nth(1)
                .and_then(|rest| rest.split(':').next())
                .unwrap_or("")
                .trim()
                .to_string();
            return vec![Directive::SelectOption { name, value }];
        }
    }
    if lower.contains("buy now") || lower.contains("place the order") || lower.contains("buy the product") {
        return vec![Directive::Buy];
    }
    if lower.contains("next page") {
        return vec![Directive::NextPage];
    }
    if lower.contains("send the confirmation code") {
        return vec![Directive::ReadCode, Directive::AnswerCode];
    }
    if lower.contains("note the confirmation code") || lower.contains("remember the confirmation code") {
        return vec![Directive::ReadCode];
    }
    if lower.contains("send") && lower.contains("to the user") || lower.contains("send a message to the user") {
        if let Some(msg) = quoted(text) {
            return vec![Directive::Answer(msg)];
        }
    }
    vec![Directive::Note(text.to_string())]
}

/// Compile a refined plan (numbered checkpoint lines) into directives.
/// Returns the directives and the checkpoint index each one came from.
fn compile_plan(plan: &str) -> Vec<(usize, Directive)> {
    let mut out = Vec::new();
    let mut checkpoint = 0usize;
    for line in plan.lines() {
        let trimmed = line.trim();
        let Some(rest) = trimmed
            .find(['.', ')', ':'])
            .filter(|idx| trimmed[..*idx].chars().all(|c| c.is_ascii_digit()) && *idx > 0)
            .map(|idx| trimmed[idx + 1..].trim())
        else {
            continue;
        };
        checkpoint += 1;
        for directive in compile_checkpoint(rest) {
            out.push((checkpoint, directive));
        }
    }
    out
}

/// Section of the prompt holding the AX tree, parsed back into lines.
fn axtree_of_prompt(prompt: &str) -> Vec<AxLine> {
    let Some(start) = prompt.find("Focused Element:") else {
        return Vec::new();
    };
    let after = &prompt[start..];
    let body_start = after.find('\n').map(|i| start + i + 1).unwrap_or(start);
    let body = &prompt[body_start..];
    let end = body.find("\n## ").or_else(|| body.find("\n# ")).unwrap_or(body.len());
    parse_axtree(&body[..end])
}

fn error_of_prompt(prompt: &str) -> Option<String> {
    let marker = "## Error from previous action: ";
    let start = prompt.find(marker)?;
    let rest = &prompt[start + marker.len()..];
    let line = rest.lines().next().unwrap_or("").trim();
    if line.is_empty() || line == "None" {
        None
    } else {
        Some(line.to_string())
    }
}

fn active_url_of_prompt(prompt: &str) -> String {
    let mut lines = prompt.lines().peekable();
    while let Some(line) = lines.next() {
        if line.trim_start().starts_with("Tab ") && line.contains("(active tab)") {
            while let Some(next) = lines.peek() {
                let t = next.trim_start();
                if let Some(url) = t.strip_prefix("URL: ") {
                    return url.trim().to_string();
                }
                if t.starts_with("Tab ") || t.starts_with("#") {
                    break;
                }
                lines.next();
            }
        }
    }
    String::new()
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Phase {
    Pending,
    AwaitingEffect,
}

/// The plan-following teacher.
pub struct OracleAgent {
    name: String,
    plan_text: String,
    program: Vec<(usize, Directive)>,
    pc: usize,
    phase: Phase,
    code: Option<String>,
    emitted: usize,
}

impl OracleAgent {
    pub fn new(name: impl Into<String>, plan_text: &str) -> OracleAgent {
        OracleAgent {
            name: name.into(),
            program: compile_plan(plan_text),
            plan_text: plan_text.trim().to_string(),
            pc: 0,
            phase: Phase::Pending,
            code: None,
            emitted: 0,
        }
    }

    fn emit(&mut self, think: &str, memory_extra: Option<&str>, action: &str) -> String {
        self.emitted += 1;
        let checkpoint = self
            .program
            .get(self.pc)
            .map(|(c, _)| *c)
            .unwrap_or_else(|| self.program.last().map(|(c, _)| *c).unwrap_or(1));
        let memory = match (&self.code, memory_extra) {
            (Some(code), Some(extra)) => format!("Confirmation code so far: {code}. {extra}"),
            (Some(code), None) => format!("Confirmation code so far: {code}."),
            (None, Some(extra)) => extra.to_string(),
            (None, None) => format!("Working on checkpoint {checkpoint} of the plan."),
        };
        format_response(think, &self.plan_text, checkpoint as u32, &memory, action)
    }

    /// Find the search box: the last textbox/combobox in the tree.
    fn search_box(lines: &[AxLine]) -> Option<&AxLine> {
        lines
            .iter()
            .rev()
            .find(|l| (l.role == "textbox" || l.role == "combobox") && l.bid.is_some())
    }

    fn visible_link<'a>(lines: &'a [AxLine], name: &str) -> Option<&'a AxLine> {
        lines
            .iter()
            .find(|l| l.role == "link" && l.name.eq_ignore_ascii_case(name) && l.visible)
    }

    fn any_link<'a>(lines: &'a [AxLine], name: &str) -> Option<&'a AxLine> {
        lines
            .iter()
            .find(|l| l.role == "link" && l.name.eq_ignore_ascii_case(name))
    }

    /// Links inside the result list of a search page, pagination excluded.
    fn result_links(lines: &[AxLine]) -> Vec<&AxLine> {
        let start = lines.iter().position(|l| {
            l.role == "heading"
                && (l.name.starts_with("Results for") || l.name.starts_with("Search results for"))
        });
        let Some(start) = start else { return Vec::new() };
        lines[start + 1..]
            .iter()
            .take_while(|l| l.role != "contentinfo")
            .filter(|l| {
                l.role == "link"
                    && !matches!(l.name.as_str(), "Previous page" | "Next page" | "Home" | "Cart")
            })
            .collect()
    }
}

impl Agent for OracleAgent {
    fn respond(&mut self, prompt: &str) -> Result<String, AgentError> {
        let lines = axtree_of_prompt(prompt);
        let error = error_of_prompt(prompt);
        let url = active_url_of_prompt(prompt);

        // popup reflex: dismiss any overlay before doing anything else
        if lines.iter().any(|l| l.role == "dialog") {
            if let Some(dismiss) = lines
                .iter()
                .find(|l| l.role == "link" && l.name.contains("No thanks") && l.visible)
            {
                let bid = dismiss.bid.clone().unwrap_or_default();
                return Ok(self.emit(
                    "A popup advertisement is covering the page. I will dismiss it before continuing.",
                    Some("Dismissed a popup ad."),
                    &format!("click('{bid}')"),
                ));
            }
        }

        // an errored attempt re-enters the pending phase of the same directive
        if error.is_some() && self.phase == Phase::AwaitingEffect {
            self.phase = Phase::Pending;
        } else if self.phase == Phase::AwaitingEffect {
            self.phase = Phase::Pending;
            self.pc += 1;
        }

        loop {
            let Some((_, directive)) = self.program.get(self.pc).cloned() else {
                // plan exhausted without a terminal answer step
                return Ok(self.emit(
                    "The plan is exhausted; there is nothing further to do.",
                    None,
                    "report_infeasible('The plan ended without producing an answer.')",
                ));
            };
            match directive {
                Directive::Note(_) => {
                    self.pc += 1;
                    continue;
                }
                Directive::Goto(site) => {
                    if url.contains(&format!("//{site}")) || url.contains(&format!("/{site}/")) {
                        self.pc += 1;
                        continue;
                    }
                    self.phase = Phase::AwaitingEffect;
                    return Ok(self.emit(
                        &format!("The task continues on the {site} site; I will navigate there."),
                        None,
                        &format!("goto('timewarp://{site}/')"),
                    ));
                }
                Directive::Search(q) => {
                    let Some(search_box) = Self::search_box(&lines) else {
                        self.phase = Phase::Pending;
                        return Ok(self.emit(
                            "No search box is in the tree yet; scrolling to look for it.",
                            None,
                            "scroll(0, 800)",
                        ));
                    };
                    if !search_box.visible {
                        if let Some(icon) = lines
                            .iter()
                            .find(|l| l.role == "link" && l.name.contains('🔍') && l.visible)
                        {
                            let bid = icon.bid.clone().unwrap_or_default();
                            return Ok(self.emit(
                                "The search box is hidden behind a search icon; clicking the icon first.",
                                None,
                                &format!("click('{bid}')"),
                            ));
                        }
                        return Ok(self.emit(
                            "The search box is not visible yet; scrolling down to reach it.",
                            None,
                            &format!("scroll(0, {SCROLL_STEP_PX})"),
                        ));
                    }
                    let bid = search_box.bid.clone().unwrap_or_default();
                    if search_box.name != q {
                        return Ok(self.emit(
                            &format!("Typing the query '{q}' into the search box."),
                            None,
                            &format!("fill('{bid}', '{}')", q.replace('\\', "\\\\").replace('\'', "\\'")),
                        ));
                    }
                    self.phase = Phase::AwaitingEffect;
                    return Ok(self.emit(
                        "The query is typed in; submitting the search with Enter.",
                        Some(&format!("Searched for '{q}'.")),
                        &format!("press('{bid}', 'Enter')"),
                    ));
                }
                Directive::OpenLink(name) => {
                    if let Some(link) = Self::visible_link(&lines, &name) {
                        let bid = link.bid.clone().unwrap_or_default();
                        self.phase = Phase::AwaitingEffect;
                        return Ok(self.emit(
                            &format!("Opening the '{name}' link."),
                            None,
                            &format!("click('{bid}')"),
                        ));
                    }
                    if Self::any_link(&lines, &name).is_some() {
                        return Ok(self.emit(
                            &format!("The '{name}' link is below the fold; scrolling down."),
                            None,
                            &format!("scroll(0, {SCROLL_STEP_PX})"),
                        ));
                    }
                    return Ok(self.emit(
                        &format!("The '{name}' link is not listed yet; scrolling to look for it."),
                        None,
                        &format!("scroll(0, {SCROLL_STEP_PX})"),
                    ));
                }
                Directive::OpenResult(n) => {
                    let results = Self::result_links(&lines);
                    match results.get(n - 1) {
                        Some(link) if link.visible => {
                            let bid = link.bid.clone().unwrap_or_default();
                            let name = link.name.clone();
                            self.phase = Phase::AwaitingEffect;
                            return Ok(self.emit(
                                &format!("Opening result {n}: '{name}'."),
                                Some(&format!("Opened result {n}: {name}.")),
                                &format!("click('{bid}')"),
                            ));
                        }
                        _ => {
                            return Ok(self.emit(
                                &format!("Result {n} is not visible yet; scrolling down."),
                                None,
                                &format!("scroll(0, {SCROLL_STEP_PX})"),
                            ));
                        }
                    }
                }
                Directive::SelectOption { name, value } => {
                    let already = lines.iter().any(|l| {
                        l.role == "StaticText" && l.name == format!("{value} (selected)")
                    });
                    if already {
                        self.pc += 1;
                        continue;
                    }
                    if let Some(link) = Self::visible_link(&lines, &value) {
                        let bid = link.bid.clone().unwrap_or_default();
                        self.phase = Phase::AwaitingEffect;
                        return Ok(self.emit(
                            &format!("Selecting {name}: '{value}'."),
                            Some(&format!("Chose {name} = {value}.")),
                            &format!("click('{bid}')"),
                        ));
                    }
                    return Ok(self.emit(
                        &format!("The '{value}' option is not visible; scrolling down."),
                        None,
                        &format!("scroll(0, {SCROLL_STEP_PX})"),
                    ));
                }
                Directive::Buy => {
                    if let Some(buy) = Self::visible_link(&lines, "Buy Now") {
                        let bid = buy.bid.clone().unwrap_or_default();
                        self.phase = Phase::AwaitingEffect;
                        return Ok(self.emit(
                            "All options are chosen; pressing Buy Now to place the order.",
                            None,
                            &format!("click('{bid}')"),
                        ));
                    }
                    return Ok(self.emit(
                        "The Buy Now control is not visible yet; scrolling down.",
                        None,
                        &format!("scroll(0, {SCROLL_STEP_PX})"),
                    ));
                }
                Directive::NextPage => {
                    if let Some(next) = Self::visible_link(&lines, "Next page") {
                        let bid = next.bid.clone().unwrap_or_default();
                        self.phase = Phase::AwaitingEffect;
                        return Ok(self.emit(
                            "Moving to the next page of results.",
                            None,
                            &format!("click('{bid}')"),
                        ));
                    }
                    return Ok(self.emit(
                        "No next-page link is visible; scrolling down to find it.",
                        None,
                        &format!("scroll(0, {SCROLL_STEP_PX})"),
                    ));
                }
                Directive::ReadCode => {
                    let code = lines.iter().find_map(|l| {
                        if l.role != "StaticText" {
                            return None;
                        }
                        let rest = l.name.strip_prefix("Confirmation code: ")?;
                        let token = rest.trim();
                        (token.len() == 10
                            && token.chars().all(|c| c.is_ascii_hexdigit() && !c.is_ascii_lowercase()))
                        .then(|| token.to_string())
                    });
                    match code {
                        Some(code) => {
                            self.code = Some(code);
                            self.pc += 1;
                            continue;
                        }
                        None => {
                            return Ok(self.emit(
                                "Looking for the confirmation code on the page.",
                                None,
                                &format!("scroll(0, {SCROLL_STEP_PX})"),
                            ));
                        }
                    }
                }
                Directive::Answer(text) => {
                    self.phase = Phase::AwaitingEffect;
                    return Ok(self.emit(
                        "The requested information is confirmed; reporting it to the user.",
                        Some("Final answer sent."),
                        &format!(
                            "send_msg_to_user('{}')",
                            text.replace('\\', "\\\\").replace('\'', "\\'")
                        ),
                    ));
                }
                Directive::AnswerCode => {
                    let Some(code) = self.code.clone() else {
                        return Ok(self.emit(
                            "No confirmation code has been captured; the order must have failed.",
                            None,
                            "report_infeasible('No confirmation code was produced.')",
                        ));
                    };
                    self.phase = Phase::AwaitingEffect;
                    return Ok(self.emit(
                        "Sending the captured confirmation code to the user.",
                        Some("Final answer sent."),
                        &format!("send_msg_to_user('{code}')"),
                    ));
                }
            }
        }
    }

    fn id(&self) -> String {
        format!("oracle:{}", self.name)
    }
}
