//! Episode state and the deterministic transition function.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::dom::{to_axtree, to_html, AxRole, DomNode};
use crate::render::features;
use crate::sites::Backends;
use crate::taskset::TaskSpec;
use crate::types::{Site, Version};

use super::action::{Action, MouseButton};
use super::page::{resolve_url, search_target, PageRef, PageState};
use super::url::parse_url;
use super::{EnvApiError, StepError};

pub const DEFAULT_MAX_STEPS: usize = 30;

/// Episode-wide UI toggles mutated by interaction.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct UiState {
    /// News v5: search stays open once the icon has been clicked.
    pub icon_open: bool,
    /// Shop v5: product pages that have already shown their popup ad.
    pub popup_seen: BTreeSet<String>,
}

#[derive(Debug, Clone)]
pub struct Tab {
    pub history: Vec<PageState>,
    pub current: PageState,
    /// Tab index (1-based) that opened this tab, for focus restoration.
    pub opener: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TabSummary {
    pub index: usize,
    pub active: bool,
    pub title: String,
    pub url: String,
}

/// The agent-visible state of one step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Observation {
    pub tabs: Vec<TabSummary>,
    pub focused_bid: Option<String>,
    pub axtree_text: String,
    pub html_text: String,
    pub last_error: Option<String>,
}

#[derive(Debug, Clone)]
pub struct EnvSession {
    pub version: Version,
    pub start_site: Site,
    pub tabs: Vec<Tab>,
    /// 1-based; 1 <= active_tab <= tabs.len() whenever tabs is nonempty.
    pub active_tab: usize,
    pub step_count: usize,
    pub max_steps: usize,
    pub ui: UiState,
    pub terminated: bool,
    pub final_message: Option<String>,
    pub infeasible_reason: Option<String>,
    pub last_error: Option<StepError>,
}

/// Outcome of one transition.
#[derive(Debug, Clone, PartialEq)]
pub struct StepOutcome {
    pub observation: Observation,
    pub terminated: bool,
    /// True when a final message exists for the judge to grade.
    pub reward_pending: bool,
}

impl EnvSession {
    /// Open one tab on the task's start-site home page.
    pub fn reset(
        task: &TaskSpec,
        version: Version,
        backends: &Backends,
        max_steps: usize,
    ) -> (EnvSession, Observation) {
        let ui = UiState::default();
        let current = PageState::build(
            backends,
            version,
            &ui,
            PageRef::Home { site: task.start_site },
            false,
        );
        let session = EnvSession {
            version,
            start_site: task.start_site,
            tabs: vec![Tab { history: Vec::new(), current, opener: None }],
            active_tab: 1,
            step_count: 0,
            max_steps,
            ui,
            terminated: false,
            final_message: None,
            infeasible_reason: None,
            last_error: None,
        };
        let observation = session.observe();
        (session, observation)
    }

    pub fn current(&self) -> &PageState {
        &self.tabs[self.active_tab - 1].current
    }

    fn current_mut(&mut self) -> &mut PageState {
        &mut self.tabs[self.active_tab - 1].current
    }

    fn active_tab_mut(&mut self) -> &mut Tab {
        &mut self.tabs[self.active_tab - 1]
    }

    /// Consume a step for agent output that never reached the parser stage
    /// (no action / multiple actions / bad syntax). The failure is surfaced
    /// in-band, exactly like an execution error.
    pub fn note_agent_error(&mut self, message: &str) -> Result<StepOutcome, EnvApiError> {
        if self.terminated {
            return Err(EnvApiError::AlreadyTerminated);
        }
        self.step_count += 1;
        self.last_error = Some(StepError::InvalidAgentResponse(message.to_string()));
        if self.step_count >= self.max_steps {
            self.terminated = true;
        }
        Ok(StepOutcome {
            observation: self.observe(),
            terminated: self.terminated,
            reward_pending: false,
        })
    }

    /// Apply one action. Execution failures are recorded in-band on the
    /// observation and never abort the episode.
    pub fn step(&mut self, action: &Action, backends: &Backends) -> Result<StepOutcome, EnvApiError> {
        if self.terminated {
            return Err(EnvApiError::AlreadyTerminated);
        }
        self.step_count += 1;
        self.last_error = None;

        let result = self.apply(action, backends);
        if let Err(e) = result {
            self.last_error = Some(e);
        }
        if self.step_count >= self.max_steps && !self.terminated {
            self.terminated = true;
        }
        Ok(StepOutcome {
            observation: self.observe(),
            terminated: self.terminated,
            reward_pending: self.terminated && self.final_message.is_some(),
        })
    }

    fn apply(&mut self, action: &Action, backends: &Backends) -> Result<(), StepError> {
        match action {
            Action::Scroll { delta_y, .. } => {
                self.current_mut().scroll_by(*delta_y);
                Ok(())
            }
            Action::Fill { bid, value, .. } => self.do_fill(bid, value, backends),
            Action::Click { bid, button, .. } => self.do_click(bid, *button, backends),
            Action::Press { bid, key_comb } => self.do_press(bid, key_comb, backends),
            Action::GoBack => {
                let tab = self.active_tab_mut();
                match tab.history.pop() {
                    Some(prev) => {
                        tab.current = prev;
                        Ok(())
                    }
                    None => Err(StepError::NoHistory),
                }
            }
            Action::Goto { url } => self.navigate(url, backends, true),
            Action::SendMsgToUser { text } => {
                self.terminated = true;
                self.final_message = Some(text.clone());
                Ok(())
            }
            Action::ReportInfeasible { reason } => {
                self.terminated = true;
                self.final_message = Some("N/A".to_string());
                self.infeasible_reason = Some(reason.clone());
                Ok(())
            }
            Action::NewTab => {
                let opener = self.active_tab;
                let current = PageState::build(
                    backends,
                    self.version,
                    &self.ui,
                    PageRef::Home { site: self.start_site },
                    false,
                );
                self.tabs.push(Tab { history: Vec::new(), current, opener: Some(opener) });
                self.active_tab = self.tabs.len();
                Ok(())
            }
            Action::TabClose => {
                if self.tabs.len() == 1 {
                    return Err(StepError::CannotCloseLastTab);
                }
                let closed = self.tabs.remove(self.active_tab - 1);
                self.active_tab = match closed.opener {
                    Some(opener) if opener >= 1 && opener <= self.tabs.len() => opener,
                    _ => self.active_tab.saturating_sub(1).max(1),
                };
                Ok(())
            }
            Action::TabFocus { index } => {
                if *index < 1 || *index > self.tabs.len() as i64 {
                    return Err(StepError::BadTabIndex(*index));
                }
                self.active_tab = *index as usize;
                Ok(())
            }
        }
    }

    /// Element lookup with the standard visibility and interactivity checks.
    fn check_target(&self, bid: &str, verb: &str) -> Result<&DomNode, StepError> {
        let page = self.current();
        let node = page
            .dom
            .find(bid)
            .ok_or_else(|| StepError::ElementNotFound(bid.to_string()))?;
        if !node.visible {
            return Err(StepError::ElementNotVisible { verb: verb.to_string(), bid: bid.to_string() });
        }
        if !node.interactive() {
            return Err(StepError::NotInteractable(bid.to_string()));
        }
        if page.popup_active {
            if let Some(popup) = page.popup_root() {
                let inside = popup.find(bid).is_some();
                if !inside {
                    return Err(StepError::BlockedByOverlay(bid.to_string()));
                }
            }
        }
        Ok(node)
    }

    fn do_click(&mut self, bid: &str, button: MouseButton, backends: &Backends) -> Result<(), StepError> {
        let node = self.check_target(bid, "click")?;
        if button != MouseButton::Left {
            // middle/right clicks land but trigger no navigation
            return Ok(());
        }
        let role = node.ax_role();
        let href = node.get_attr("href").map(|s| s.to_string());
        let data_href = node.get_attr("data-href").map(|s| s.to_string());
        let tag = node.tag.clone();
        let input_type = node.get_attr("type").unwrap_or("").to_string();
        match role {
            AxRole::Link => {
                let href = href.unwrap_or_default();
                self.follow_href(&href, backends)
            }
            AxRole::Option => match data_href {
                Some(href) => self.follow_href(&href, backends),
                None => Ok(()),
            },
            AxRole::Button if tag == "input" && input_type == "submit" => {
                self.submit_form_containing(bid, backends)
            }
            AxRole::Button => self.submit_form_containing(bid, backends),
            AxRole::Textbox | AxRole::Combobox => {
                self.current_mut().focused = Some(bid.to_string());
                Ok(())
            }
            _ => Ok(()),
        }
    }

    fn do_fill(&mut self, bid: &str, value: &str, backends: &Backends) -> Result<(), StepError> {
        let node = self.check_target(bid, "fill")?;
        if !matches!(node.ax_role(), AxRole::Textbox | AxRole::Combobox) {
            return Err(StepError::NotInteractable(bid.to_string()));
        }
        let version = self.version;
        let site = self.current().page.site();
        let dropdown = features(site, version).has_dropdown_suggestions;
        let suggestions = if dropdown && site == Site::Wiki && !value.is_empty() {
            crate::sites::wiki::suggestions(&backends.wiki, value)
        } else {
            Vec::new()
        };
        let ui = self.ui.clone();
        let page = self.current_mut();
        page.form_value = value.to_string();
        page.suggestions = suggestions;
        page.focused = Some(bid.to_string());
        page.render(backends, version, &ui);
        Ok(())
    }

    fn do_press(&mut self, bid: &str, key_comb: &str, backends: &Backends) -> Result<(), StepError> {
        let node = self.check_target(bid, "press")?;
        let is_entry = matches!(node.ax_role(), AxRole::Textbox | AxRole::Combobox);
        self.current_mut().focused = Some(bid.to_string());
        if is_entry && (key_comb == "Enter" || key_comb == "Return") {
            return self.submit_form_containing(bid, backends);
        }
        // other key combinations are accepted with no page effect
        Ok(())
    }

    fn submit_form_containing(&mut self, bid: &str, backends: &Backends) -> Result<(), StepError> {
        let page = self.current();
        let form = find_form_containing(&page.dom, bid)
            .ok_or_else(|| StepError::NotInteractable(bid.to_string()))?;
        if form.get_attr("class") == Some("search") {
            let query = page.form_value.trim().to_string();
            let site = page.page.site();
            let target = search_target(backends, self.version, site, &query);
            self.open_page(target, backends, true);
            Ok(())
        } else {
            Ok(())
        }
    }

    /// Follow a link href: fragment anchors scroll, special paths toggle
    /// episode UI state in place, everything else navigates.
    fn follow_href(&mut self, href: &str, backends: &Backends) -> Result<(), StepError> {
        if let Some(anchor) = href.strip_prefix('#') {
            let anchor = anchor.to_string();
            self.current_mut().scroll_to_anchor(&anchor);
            return Ok(());
        }
        self.navigate(href, backends, true)
    }

    fn navigate(&mut self, raw: &str, backends: &Backends, push: bool) -> Result<(), StepError> {
        let (url, _version) = parse_url(raw).map_err(StepError::DisallowedUrl)?;

        // in-place transitions: open the icon-gated search, dismiss a popup
        if url.segments.first().map(|s| s.as_str()) == Some("open_search") {
            self.ui.icon_open = true;
            let target = url.query_get("return").map(|s| s.to_string());
            match target {
                Some(ret) if !ret.is_empty() => {
                    let (ret_url, _) = parse_url(&ret).map_err(StepError::DisallowedUrl)?;
                    let page = resolve_url(backends, &ret_url)?;
                    let keep_viewport = self.current().viewport;
                    let popup = self.current().popup_active;
                    let version = self.version;
                    let ui = self.ui.clone();
                    let state = self.current_mut();
                    if state.page == page {
                        state.render(backends, version, &ui);
                    } else {
                        *state = PageState::build(backends, version, &ui, page, popup);
                        state.viewport = keep_viewport;
                        state.render(backends, version, &ui);
                    }
                    return Ok(());
                }
                _ => {
                    let version = self.version;
                    let ui = self.ui.clone();
                    let state = self.current_mut();
                    state.render(backends, version, &ui);
                    return Ok(());
                }
            }
        }
        if url.query_get("dismiss_ad") == Some("1") {
            if let Some(id) = url.segments.get(1).cloned() {
                self.ui.popup_seen.insert(id);
            }
            let version = self.version;
            let ui = self.ui.clone();
            let state = self.current_mut();
            state.popup_active = false;
            state.render(backends, version, &ui);
            return Ok(());
        }

        let page = resolve_url(backends, &url)?;
        self.open_page(page, backends, push);
        Ok(())
    }

    /// Replace the current page, optionally pushing the old one on history.
    fn open_page(&mut self, page: PageRef, backends: &Backends, push: bool) {
        let popup = match &page {
            PageRef::ShopProduct { id, .. }
                if features(Site::Shop, self.version).popup_ads
                    && !self.ui.popup_seen.contains(id) =>
            {
                self.ui.popup_seen.insert(id.clone());
                true
            }
            _ => false,
        };
        let state = PageState::build(backends, self.version, &self.ui, page, popup);
        let tab = self.active_tab_mut();
        if push {
            let old = std::mem::replace(&mut tab.current, state);
            tab.history.push(old);
        } else {
            tab.current = state;
        }
    }

    pub fn observe(&self) -> Observation {
        let current = self.current();
        let tabs = self
            .tabs
            .iter()
            .enumerate()
            .map(|(i, tab)| TabSummary {
                index: i + 1,
                active: i + 1 == self.active_tab,
                title: tab.current.title.clone(),
                url: tab.current.url.kernel_string(),
            })
            .collect();
        Observation {
            tabs,
            focused_bid: current.focused.clone(),
            axtree_text: to_axtree(&current.dom, current.focused.as_deref()),
            html_text: to_html(&current.dom),
            last_error: self.last_error.as_ref().map(|e| e.to_string()),
        }
    }
}

fn find_form_containing<'a>(root: &'a DomNode, bid: &str) -> Option<&'a DomNode> {
    let mut found: Option<&DomNode> = None;
    fn rec<'a>(node: &'a DomNode, bid: &str, found: &mut Option<&'a DomNode>) -> bool {
        let mut contains = node.bid.as_ref().map(|b| b.as_str()) == Some(bid);
        for c in &node.children {
            if rec(c, bid, found) {
                contains = true;
            }
        }
        if contains && node.tag == "form" && found.is_none() {
            *found = Some(node);
        }
        contains
    }
    rec(root, bid, &mut found);
    found
}
