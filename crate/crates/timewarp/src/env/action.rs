//! Browser-level actions and their canonical call-expression serialization.
//! One serialized action per line is also the replay-script file format.

use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MouseButton {
    Left,
    Middle,
    Right,
}

impl MouseButton {
    pub fn name(&self) -> &'static str {
        match self {
            MouseButton::Left => "left",
            MouseButton::Middle => "middle",
            MouseButton::Right => "right",
        }
    }

    pub fn parse(s: &str) -> Option<MouseButton> {
        match s {
            "left" => Some(MouseButton::Left),
            "middle" => Some(MouseButton::Middle),
            "right" => Some(MouseButton::Right),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Modifier {
    Alt,
    Control,
    ControlOrMeta,
    Meta,
    Shift,
}

impl Modifier {
    pub fn name(&self) -> &'static str {
        match self {
            Modifier::Alt => "Alt",
            Modifier::Control => "Control",
            Modifier::ControlOrMeta => "ControlOrMeta",
            Modifier::Meta => "Meta",
            Modifier::Shift => "Shift",
        }
    }

    pub fn parse(s: &str) -> Option<Modifier> {
        match s {
            "Alt" => Some(Modifier::Alt),
            "Control" => Some(Modifier::Control),
            "ControlOrMeta" => Some(Modifier::ControlOrMeta),
            "Meta" => Some(Modifier::Meta),
            "Shift" => Some(Modifier::Shift),
            _ => None,
        }
    }
}

/// The 11 browser-level action kinds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Action {
    Scroll { delta_x: f64, delta_y: f64 },
    Fill { bid: String, value: String, enable_autocomplete_menu: bool },
    Click { bid: String, button: MouseButton, modifiers: Vec<Modifier> },
    Press { bid: String, key_comb: String },
    GoBack,
    Goto { url: String },
    SendMsgToUser { text: String },
    ReportInfeasible { reason: String },
    NewTab,
    TabClose,
    TabFocus { index: i64 },
}

impl Action {
    pub fn kind_name(&self) -> &'static str {
        match self {
            Action::Scroll { .. } => "scroll",
            Action::Fill { .. } => "fill",
            Action::Click { .. } => "click",
            Action::Press { .. } => "press",
            Action::GoBack => "go_back",
            Action::Goto { .. } => "goto",
            Action::SendMsgToUser { .. } => "send_msg_to_user",
            Action::ReportInfeasible { .. } => "report_infeasible",
            Action::NewTab => "new_tab",
            Action::TabClose => "tab_close",
            Action::TabFocus { .. } => "tab_focus",
        }
    }

    /// True for send_msg_to_user / report_infeasible, which end the episode.
    pub fn is_terminal(&self) -> bool {
        matches!(self, Action::SendMsgToUser { .. } | Action::ReportInfeasible { .. })
    }
}

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('\'');
    for c in s.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '\'' => out.push_str("\\'"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            _ => out.push(c),
        }
    }
    out.push('\'');
    out
}

impl fmt::Display for Action {
    /// Canonical call-expression form; defaults are omitted. Parsing this
    /// form yields the same action back.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Action::Scroll { delta_x, delta_y } => write!(f, "scroll({delta_x}, {delta_y})"),
            Action::Fill { bid, value, enable_autocomplete_menu } => {
                if *enable_autocomplete_menu {
                    write!(f, "fill({}, {}, True)", quote(bid), quote(value))
                } else {
                    write!(f, "fill({}, {})", quote(bid), quote(value))
                }
            }
            Action::Click { bid, button, modifiers } => {
                write!(f, "click({}", quote(bid))?;
                if *button != MouseButton::Left {
                    write!(f, ", button={}", quote(button.name()))?;
                }
                if !modifiers.is_empty() {
                    let mods: Vec<String> = modifiers.iter().map(|m| quote(m.name())).collect();
                    write!(f, ", modifiers=[{}]", mods.join(", "))?;
                }
                write!(f, ")")
            }
            Action::Press { bid, key_comb } => {
                write!(f, "press({}, {})", quote(bid), quote(key_comb))
            }
            Action::GoBack => write!(f, "go_back()"),
            Action::Goto { url } => write!(f, "goto({})", quote(url)),
            Action::SendMsgToUser { text } => write!(f, "send_msg_to_user({})", quote(text)),
            Action::ReportInfeasible { reason } => {
                write!(f, "report_infeasible({})", quote(reason))
            }
            Action::NewTab => write!(f, "new_tab()"),
            Action::TabClose => write!(f, "tab_close()"),
            Action::TabFocus { index } => write!(f, "tab_focus({index})"),
        }
    }
}

/// Shorthand constructors used throughout tests and scripted agents.
impl Action {
    pub fn click(bid: impl Into<String>) -> Action {
        Action::Click {
            bid: bid.into(),
            button: MouseButton::Left,
            modifiers: Vec::new(),
        }
    }

    pub fn fill(bid: impl Into<String>, value: impl Into<String>) -> Action {
        Action::Fill {
            bid: bid.into(),
            value: value.into(),
            enable_autocomplete_menu: false,
        }
    }

    pub fn press(bid: impl Into<String>, key_comb: impl Into<String>) -> Action {
        Action::Press {
            bid: bid.into(),
            key_comb: key_comb.into(),
        }
    }

    pub fn goto(url: impl Into<String>) -> Action {
        Action::Goto { url: url.into() }
    }

    pub fn send_msg(text: impl Into<String>) -> Action {
        Action::SendMsgToUser { text: text.into() }
    }

    pub fn scroll(delta_x: f64, delta_y: f64) -> Action {
        Action::Scroll { delta_x, delta_y }
    }
}
