//! Abstract vertical layout and viewport visibility.
//!
//! There is no pixel layout engine. Block nodes occupy whole layout units
//! stacked in document order: a text run of n characters takes
//! `ceil(n / 80)` units, any other block takes at least 1 unit. The viewport
//! is 40 units tall and scroll deltas are converted at 20 px per unit.
//! A node is visible iff its vertical extent intersects the viewport and it is
//! not hidden by construction (head/script subtrees, `hidden` attribute,
//! closed autocomplete menus).

use super::node::DomNode;

pub const VIEWPORT_UNITS: f64 = 40.0;
pub const CHARS_PER_LINE: usize = 80;
pub const PX_PER_UNIT: f64 = 20.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Viewport {
    pub scroll_y: f64,
    pub height: f64,
}

impl Default for Viewport {
    fn default() -> Self {
        Viewport {
            scroll_y: 0.0,
            height: VIEWPORT_UNITS,
        }
    }
}

impl Viewport {
    /// Apply a scroll delta given in pixels, clamping to document bounds.
    pub fn scrolled(&self, delta_y_px: f64, doc_height: f64) -> Viewport {
        let max_scroll = (doc_height - self.height).max(0.0);
        let scroll_y = (self.scroll_y + delta_y_px / PX_PER_UNIT).clamp(0.0, max_scroll);
        Viewport { scroll_y, ..*self }
    }
}

const INLINE_TAGS: &[&str] = &[
    "a", "span", "b", "i", "em", "strong", "font", "tt", "small", "code", "label", "input",
    "button", "select", "option", "img", "sup", "sub",
];

fn is_inline(node: &DomNode) -> bool {
    INLINE_TAGS.contains(&node.tag.as_str())
}

fn hidden_by_construction(node: &DomNode) -> bool {
    matches!(node.tag.as_str(), "head" | "script" | "style" | "meta" | "title")
        || node.attrs.contains_key("hidden")
}

/// Overlay elements (popup ads) float above the page and are always on
/// screen regardless of scroll position.
fn is_overlay(node: &DomNode) -> bool {
    node.tag == "dialog"
}

/// Lay out the tree, then mark every node's `visible` flag against the
/// viewport. Returns the total document height in layout units.
pub fn compute_visibility(root: &mut DomNode, viewport: Viewport) -> f64 {
    let height = layout_block(root, 0.0);
    mark(root, viewport, false);
    height
}

/// Document height without touching visibility (used for scroll clamping).
pub fn document_height(root: &mut DomNode) -> f64 {
    layout_block(root, 0.0)
}

fn layout_block(node: &mut DomNode, y0: f64) -> f64 {
    node.y = y0;
    if hidden_by_construction(node) {
        node.height = 0.0;
        zero_extent(node, y0);
        return 0.0;
    }
    let mut cursor = y0;
    let count = node.children.len();
    let mut i = 0;
    while i < count {
        let child = &node.children[i];
        if child.is_text() || is_inline(child) {
            // consecutive text/inline children share one run of text lines
            let start = i;
            let mut chars = 0usize;
            while i < count {
                let c = &node.children[i];
                if !(c.is_text() || is_inline(c)) {
                    break;
                }
                chars += inline_chars(c);
                i += 1;
            }
            let lines = chars.max(1).div_ceil(CHARS_PER_LINE) as f64;
            for run_child in &mut node.children[start..i] {
                set_extent(run_child, cursor, lines);
            }
            cursor += lines;
        } else {
            cursor += layout_block(&mut node.children[i], cursor);
            i += 1;
        }
    }
    let mut height = cursor - y0;
    if height <= 0.0 {
        height = 1.0;
    }
    node.height = height;
    height
}

fn inline_chars(node: &DomNode) -> usize {
    let mut n = node.text.as_deref().map(|t| t.trim().len()).unwrap_or(0);
    for c in &node.children {
        n += inline_chars(c);
    }
    n
}

fn set_extent(node: &mut DomNode, y: f64, height: f64) {
    node.y = y;
    node.height = height;
    for c in &mut node.children {
        set_extent(c, y, height);
    }
}

fn zero_extent(node: &mut DomNode, y: f64) {
    node.y = y;
    node.height = 0.0;
    for c in &mut node.children {
        zero_extent(c, y);
    }
}

fn mark(node: &mut DomNode, viewport: Viewport, parent_hidden: bool) {
    let hidden = parent_hidden || hidden_by_construction(node);
    if is_overlay(node) && !hidden {
        mark_all(node, true);
        return;
    }
    let top = viewport.scroll_y;
    let bottom = viewport.scroll_y + viewport.height;
    node.visible = !hidden && node.height > 0.0 && node.y < bottom && node.y + node.height > top;
    for c in &mut node.children {
        mark(c, viewport, hidden);
    }
}

fn mark_all(node: &mut DomNode, value: bool) {
    node.visible = value;
    for c in &mut node.children {
        mark_all(c, value);
    }
}
