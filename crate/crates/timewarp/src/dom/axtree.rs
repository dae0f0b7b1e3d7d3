//! Accessibility-tree text serialization.
//!
//! One line per AX-relevant element: `[bid] role 'name'` followed by flags
//! drawn from `{clickable, visible, focused}`. Bare text is emitted as
//! `StaticText '...'` without a bid, only while visible. Indentation encodes
//! the depth among emitted ancestors.

use super::node::{AxRole, DomNode};

/// Serialize the tree rooted at `root` into AX-tree text. `focused` names the
/// element flagged `focused`, if any.
pub fn to_axtree(root: &DomNode, focused: Option<&str>) -> String {
    let mut out = String::new();
    emit(root, focused, 0, &mut out);
    out
}

fn emit(node: &DomNode, focused: Option<&str>, depth: usize, out: &mut String) {
    match node.ax_role() {
        AxRole::Skipped => {}
        AxRole::StaticText => {
            if node.visible {
                let name = node.ax_name();
                if !name.is_empty() {
                    indent(depth, out);
                    out.push_str(&format!("StaticText '{}'\n", escape(&name)));
                }
            }
        }
        AxRole::Generic => {
            // no line of its own; children stay at the current depth
            for c in &node.children {
                emit(c, focused, depth, out);
            }
        }
        role => {
            indent(depth, out);
            let bid = node.bid.as_ref().map(|b| b.as_str()).unwrap_or("?");
            out.push_str(&format!("[{}] {} '{}'", bid, role.label(), escape(&node.ax_name())));
            if node.interactive() {
                out.push_str(", clickable");
            }
            if node.visible {
                out.push_str(", visible");
            }
            if focused.is_some() && focused == node.bid.as_ref().map(|b| b.as_str()) {
                out.push_str(", focused");
            }
            out.push('\n');
            let consume_text = role.names_from_content();
            for c in &node.children {
                if consume_text && c.is_text() {
                    continue;
                }
                emit(c, focused, depth + 1, out);
            }
        }
    }
}

fn indent(depth: usize, out: &mut String) {
    for _ in 0..depth {
        out.push('\t');
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('\'', "\\'")
}

/// A parsed AX-tree line; the inverse view used by scripted agents and tests.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxLine {
    pub depth: usize,
    pub bid: Option<String>,
    pub role: String,
    pub name: String,
    pub clickable: bool,
    pub visible: bool,
    pub focused: bool,
}

/// Parse AX-tree text back into lines. Tolerant of arbitrary indentation.
pub fn parse_axtree(text: &str) -> Vec<AxLine> {
    let mut lines = Vec::new();
    for raw in text.lines() {
        let depth = raw.chars().take_while(|c| *c == '\t').count();
        let line = raw.trim_start_matches('\t');
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("StaticText '") {
            if let Some(name) = take_quoted_tail(rest) {
                lines.push(AxLine {
                    depth,
                    bid: None,
                    role: "StaticText".to_string(),
                    name,
                    clickable: false,
                    visible: true,
                    focused: false,
                });
            }
            continue;
        }
        let Some(rest) = line.strip_prefix('[') else { continue };
        let Some(close) = rest.find(']') else { continue };
        let bid = rest[..close].to_string();
        let rest = rest[close + 1..].trim_start();
        let Some(quote) = rest.find(" '") else { continue };
        let role = rest[..quote].to_string();
        let after = &rest[quote + 2..];
        let Some((name, flags)) = split_name_and_flags(after) else {
            continue;
        };
        lines.push(AxLine {
            depth,
            bid: Some(bid),
            role,
            name,
            clickable: flags.contains(&"clickable"),
            visible: flags.contains(&"visible"),
            focused: flags.contains(&"focused"),
        });
    }
    lines
}

/// Split `name', flag, flag` where the name may contain escaped quotes.
fn split_name_and_flags(s: &str) -> Option<(String, Vec<&str>)> {
    let mut name = String::new();
    let mut chars = s.char_indices();
    while let Some((i, c)) = chars.next() {
        match c {
            '\\' => {
                if let Some((_, next)) = chars.next() {
                    name.push(next);
                }
            }
            '\'' => {
                let tail = &s[i + 1..];
                let flags = tail
                    .split(',')
                    .map(|f| f.trim())
                    .filter(|f| !f.is_empty())
                    .collect();
                return Some((name, flags));
            }
            _ => name.push(c),
        }
    }
    None
}

fn take_quoted_tail(s: &str) -> Option<String> {
    split_name_and_flags(s).map(|(name, _)| name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dom::layout::{compute_visibility, Viewport};
    use crate::dom::node::{assign_bids, el, text};

    #[test]
    fn heading_line_matches_observation_format() {
        let mut tree = assign_bids(
            el("body").child(el("h1").text_child("HomePage")),
        );
        compute_visibility(&mut tree, Viewport::default());
        let ax = to_axtree(&tree, None);
        assert!(ax.contains("heading 'HomePage', visible"), "{ax}");
    }

    #[test]
    fn invisible_link_has_no_visible_flag() {
        let mut tree = assign_bids(
            el("body")
                .children_from((0..50).map(|_| el("p").text_child("x".repeat(200))))
                .child(el("a").attr("href", "/prefs").text_child("Preferences")),
        );
        compute_visibility(&mut tree, Viewport::default());
        let ax = to_axtree(&tree, None);
        let line = ax.lines().find(|l| l.contains("Preferences")).unwrap();
        assert!(line.contains("link 'Preferences', clickable"));
        assert!(!line.contains("visible"));
    }

    #[test]
    fn empty_tree_serializes_to_nothing() {
        let mut tree = assign_bids(el("html"));
        compute_visibility(&mut tree, Viewport::default());
        // html is a generic container; nothing AX-relevant inside
        assert_eq!(to_axtree(&tree, None), "");
    }

    #[test]
    fn link_text_is_consumed_not_restated() {
        let mut tree = assign_bids(
            el("body").child(
                el("h1").child(el("a").attr("href", "/").text_child("HomePage")),
            ),
        );
        compute_visibility(&mut tree, Viewport::default());
        let ax = to_axtree(&tree, None);
        assert!(ax.contains("heading 'HomePage'"));
        assert!(ax.contains("link 'HomePage', clickable, visible"));
        assert!(!ax.contains("StaticText 'HomePage'"));
    }

    #[test]
    fn paragraph_has_empty_name_and_children_emitted() {
        let mut tree = assign_bids(
            el("body").child(
                el("p")
                    .child(el("a").attr("href", "/a").text_child("HomePage"))
                    .child(text("|"))
                    .child(el("a").attr("href", "/b").text_child("RecentChanges")),
            ),
        );
        compute_visibility(&mut tree, Viewport::default());
        let ax = to_axtree(&tree, None);
        assert!(ax.contains("paragraph ''"));
        assert!(ax.contains("StaticText '|'"));
        assert!(ax.contains("link 'RecentChanges', clickable, visible"));
    }

    #[test]
    fn focused_flag_follows_argument() {
        let mut tree = assign_bids(el("body").child(el("input").attr("name", "q")));
        compute_visibility(&mut tree, Viewport::default());
        let input_bid = tree.walk().find(|n| n.tag == "input").unwrap().bid.clone().unwrap();
        let ax = to_axtree(&tree, Some(input_bid.as_str()));
        assert!(ax.contains("focused"), "{ax}");
    }

    #[test]
    fn parse_round_trips_lines() {
        let mut tree = assign_bids(
            el("body")
                .child(el("h1").text_child("It's here"))
                .child(el("a").attr("href", "/x").text_child("Go")),
        );
        compute_visibility(&mut tree, Viewport::default());
        let ax = to_axtree(&tree, None);
        let lines = parse_axtree(&ax);
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0].role, "heading");
        assert_eq!(lines[0].name, "It's here");
        assert!(lines[1].clickable);
    }
}
