//! Element tree with stable element identifiers (bids), derived accessibility
//! roles, and interaction affordances.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Tag name used internally for text nodes.
pub const TEXT_TAG: &str = "#text";

/// Unique per-page element identifier. Generated bids are decimal strings in
/// document order, but any alphanumeric identifier is accepted when parsing
/// agent actions.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Bid(pub String);

impl Bid {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Bid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Bid {
    fn from(s: &str) -> Self {
        Bid(s.to_string())
    }
}

/// Accessibility role derived from tag and attributes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AxRole {
    Heading,
    Link,
    Paragraph,
    StaticText,
    Textbox,
    Button,
    Combobox,
    Option,
    Tab,
    Image,
    List,
    ListItem,
    Table,
    Row,
    Cell,
    Navigation,
    Main,
    Banner,
    ContentInfo,
    Dialog,
    Separator,
    /// Container with no AX line of its own; children are still walked.
    Generic,
    /// Subtree is skipped entirely (head, script, ...).
    Skipped,
}

impl AxRole {
    pub fn label(&self) -> &'static str {
        match self {
            AxRole::Heading => "heading",
            AxRole::Link => "link",
            AxRole::Paragraph => "paragraph",
            AxRole::StaticText => "StaticText",
            AxRole::Textbox => "textbox",
            AxRole::Button => "button",
            AxRole::Combobox => "combobox",
            AxRole::Option => "option",
            AxRole::Tab => "tab",
            AxRole::Image => "image",
            AxRole::List => "list",
            AxRole::ListItem => "listitem",
            AxRole::Table => "table",
            AxRole::Row => "row",
            AxRole::Cell => "cell",
            AxRole::Navigation => "navigation",
            AxRole::Main => "main",
            AxRole::Banner => "banner",
            AxRole::ContentInfo => "contentinfo",
            AxRole::Dialog => "dialog",
            AxRole::Separator => "separator",
            AxRole::Generic => "generic",
            AxRole::Skipped => "",
        }
    }

    /// Roles whose accessible name is taken from descendant text; their bare
    /// text children are not re-emitted as StaticText lines.
    pub fn names_from_content(&self) -> bool {
        matches!(
            self,
            AxRole::Heading | AxRole::Link | AxRole::Button | AxRole::Option | AxRole::Tab
        )
    }
}

/// A node in the page tree. Trees are immutable once a page has been rendered;
/// transitions produce fresh trees.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomNode {
    pub bid: Option<Bid>,
    pub tag: String,
    pub attrs: BTreeMap<String, String>,
    /// Set only on text nodes (`tag == "#text"`).
    pub text: Option<String>,
    pub children: Vec<DomNode>,
    /// Computed by the layout pass; nodes start visible until laid out.
    pub visible: bool,
    /// Vertical extent in abstract layout units, filled in by layout.
    #[serde(default)]
    pub y: f64,
    #[serde(default)]
    pub height: f64,
}

/// Build an element node.
pub fn el(tag: &str) -> DomNode {
    DomNode {
        bid: None,
        tag: tag.to_string(),
        attrs: BTreeMap::new(),
        text: None,
        children: Vec::new(),
        visible: true,
        y: 0.0,
        height: 0.0,
    }
}

/// Build a bare text node.
pub fn text(s: impl Into<String>) -> DomNode {
    DomNode {
        bid: None,
        tag: TEXT_TAG.to_string(),
        attrs: BTreeMap::new(),
        text: Some(s.into()),
        children: Vec::new(),
        visible: true,
        y: 0.0,
        height: 0.0,
    }
}

impl DomNode {
    pub fn is_text(&self) -> bool {
        self.tag == TEXT_TAG
    }

    pub fn attr(mut self, name: &str, value: impl Into<String>) -> Self {
        self.attrs.insert(name.to_string(), value.into());
        self
    }

    pub fn child(mut self, node: DomNode) -> Self {
        self.children.push(node);
        self
    }

    pub fn children_from(mut self, nodes: impl IntoIterator<Item = DomNode>) -> Self {
        self.children.extend(nodes);
        self
    }

    pub fn text_child(mut self, s: impl Into<String>) -> Self {
        self.children.push(text(s));
        self
    }

    pub fn get_attr(&self, name: &str) -> Option<&str> {
        self.attrs.get(name).map(|s| s.as_str())
    }

    /// Derived accessibility role.
    pub fn ax_role(&self) -> AxRole {
        if self.is_text() {
            return AxRole::StaticText;
        }
        match self.tag.as_str() {
            "h1" | "h2" | "h3" | "h4" | "h5" | "h6" => AxRole::Heading,
            "a" => {
                if self.attrs.contains_key("href") {
                    AxRole::Link
                } else {
                    AxRole::Generic
                }
            }
            "p" => AxRole::Paragraph,
            "input" => match self.get_attr("type").unwrap_or("text") {
                "submit" | "button" => AxRole::Button,
                _ => {
                    if self.attrs.contains_key("list") {
                        AxRole::Combobox
                    } else {
                        AxRole::Textbox
                    }
                }
            },
            "textarea" => AxRole::Textbox,
            "button" => AxRole::Button,
            "select" => AxRole::Combobox,
            "datalist" => AxRole::Generic,
            "option" => AxRole::Option,
            "img" => AxRole::Image,
            "ul" | "ol" => AxRole::List,
            "li" => AxRole::ListItem,
            "table" => AxRole::Table,
            "tr" => AxRole::Row,
            "td" | "th" => AxRole::Cell,
            "nav" => AxRole::Navigation,
            "main" => AxRole::Main,
            "header" => AxRole::Banner,
            "footer" => AxRole::ContentInfo,
            "dialog" => AxRole::Dialog,
            "hr" => AxRole::Separator,
            "head" | "meta" | "title" | "script" | "style" => AxRole::Skipped,
            _ => AxRole::Generic,
        }
    }

    /// True when the element accepts click/fill interaction.
    pub fn interactive(&self) -> bool {
        matches!(
            self.ax_role(),
            AxRole::Link
                | AxRole::Textbox
                | AxRole::Button
                | AxRole::Combobox
                | AxRole::Option
                | AxRole::Tab
        )
    }

    /// Accessible name: content text for naming roles, label attributes for
    /// form controls, alt text for images, empty otherwise.
    pub fn ax_name(&self) -> String {
        let role = self.ax_role();
        match role {
            AxRole::StaticText => collapse_ws(self.text.as_deref().unwrap_or("")),
            AxRole::Textbox | AxRole::Combobox => {
                let value = self.get_attr("value").unwrap_or("");
                if !value.is_empty() {
                    return collapse_ws(value);
                }
                let label = self
                    .get_attr("placeholder")
                    .or_else(|| self.get_attr("aria-label"))
                    .unwrap_or("");
                collapse_ws(label)
            }
            AxRole::Image => collapse_ws(self.get_attr("alt").unwrap_or("")),
            _ if role.names_from_content() => collapse_ws(&self.content_text()),
            _ => String::new(),
        }
    }

    /// Concatenated descendant text.
    pub fn content_text(&self) -> String {
        let mut out = String::new();
        self.collect_text(&mut out);
        out
    }

    fn collect_text(&self, out: &mut String) {
        if let Some(t) = &self.text {
            out.push_str(t);
        }
        for c in &self.children {
            c.collect_text(out);
        }
    }

    /// Pre-order iterator over the subtree, self included.
    pub fn walk(&self) -> Walk<'_> {
        Walk { stack: vec![self] }
    }

    /// Find a node by bid.
    pub fn find(&self, bid: &str) -> Option<&DomNode> {
        self.walk()
            .find(|n| n.bid.as_ref().map(|b| b.as_str()) == Some(bid))
    }

    /// All bids in the subtree, in document order.
    pub fn bids(&self) -> Vec<Bid> {
        self.walk().filter_map(|n| n.bid.clone()).collect()
    }
}

pub struct Walk<'a> {
    stack: Vec<&'a DomNode>,
}

impl<'a> Iterator for Walk<'a> {
    type Item = &'a DomNode;

    fn next(&mut self) -> Option<Self::Item> {
        let node = self.stack.pop()?;
        self.stack.extend(node.children.iter().rev());
        Some(node)
    }
}

/// Trim and collapse internal whitespace runs to single spaces.
pub fn collapse_ws(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Assign decimal bids to every element node in document order, starting at 1.
/// Text nodes carry no bid. Re-rendering the same state reproduces the same
/// numbering.
pub fn assign_bids(mut root: DomNode) -> DomNode {
    let mut next = 1u64;
    assign_rec(&mut root, &mut next);
    root
}

fn assign_rec(node: &mut DomNode, next: &mut u64) {
    if !node.is_text() {
        node.bid = Some(Bid(next.to_string()));
        *next += 1;
    }
    for c in &mut node.children {
        assign_rec(c, next);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_node_gets_bid_one() {
        let tree = assign_bids(el("html"));
        assert_eq!(tree.bid, Some(Bid("1".into())));
    }

    #[test]
    fn head_fragment_numbered_in_document_order() {
        let tree = assign_bids(
            el("head")
                .child(
                    el("meta")
                        .attr("content", "text/html; charset=utf-8")
                        .attr("http-equiv", "Content-Type"),
                )
                .child(el("title").text_child(" HomePage-Wikipedia")),
        );
        assert_eq!(tree.bid, Some(Bid("1".into())));
        assert_eq!(tree.children[0].bid, Some(Bid("2".into())));
        assert_eq!(tree.children[1].bid, Some(Bid("3".into())));
    }

    #[test]
    fn bids_have_no_duplicates() {
        let tree = assign_bids(
            el("html").child(el("body").children_from([
                el("p").text_child("a"),
                el("p").child(el("a").attr("href", "/x").text_child("link")),
                el("ul").children_from([el("li"), el("li"), el("li")]),
            ])),
        );
        let bids = tree.bids();
        let mut dedup = bids.clone();
        dedup.sort();
        dedup.dedup();
        assert_eq!(bids.len(), dedup.len());
        let elements = tree.walk().filter(|n| !n.is_text()).count();
        assert_eq!(bids.len(), elements);
    }

    #[test]
    fn text_nodes_carry_no_bid() {
        let tree = assign_bids(el("p").text_child("hello"));
        assert!(tree.children[0].bid.is_none());
    }

    #[test]
    fn interactive_roles_are_the_allowed_set() {
        let link = el("a").attr("href", "/");
        assert!(link.interactive());
        assert_eq!(link.ax_role(), AxRole::Link);
        let para = el("p");
        assert!(!para.interactive());
        let input = el("input");
        assert_eq!(input.ax_role(), AxRole::Textbox);
        assert!(input.interactive());
        let combo = el("input").attr("list", "sugg");
        assert_eq!(combo.ax_role(), AxRole::Combobox);
    }
}
