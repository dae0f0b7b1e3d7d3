//! HTML serialization with embedded `bid` and `visible` attributes, plus a
//! strict parser for the same subset. Serializing, parsing, and serializing
//! again yields identical bytes.

use std::collections::BTreeMap;

use thiserror::Error;

use super::node::{el, text, DomNode};

const VOID_TAGS: &[&str] = &["meta", "img", "input", "br", "hr", "link", "base"];

/// Serialize a tree to HTML text. The `bid` attribute comes first, remaining
/// attributes in name order, with `visible=""` emitted for visible nodes.
pub fn to_html(root: &DomNode) -> String {
    let mut out = String::new();
    write_node(root, 0, &mut out);
    out
}

fn write_node(node: &DomNode, depth: usize, out: &mut String) {
    if node.is_text() {
        out.push_str(&escape_text(node.text.as_deref().unwrap_or("")));
        return;
    }
    out.push('<');
    out.push_str(&node.tag);
    if let Some(bid) = &node.bid {
        out.push_str(&format!(" bid=\"{}\"", escape_attr(bid.as_str())));
    }
    let mut attrs: BTreeMap<&str, &str> = node
        .attrs
        .iter()
        .map(|(k, v)| (k.as_str(), v.as_str()))
        .collect();
    if node.visible {
        attrs.insert("visible", "");
    }
    for (k, v) in attrs {
        out.push_str(&format!(" {}=\"{}\"", k, escape_attr(v)));
    }
    if VOID_TAGS.contains(&node.tag.as_str()) {
        out.push_str("/>");
        return;
    }
    out.push('>');
    let inline_content = node.children.iter().any(|c| c.is_text());
    if inline_content {
        for c in &node.children {
            write_node(c, depth + 1, out);
        }
    } else if !node.children.is_empty() {
        for c in &node.children {
            out.push('\n');
            for _ in 0..=depth {
                out.push(' ');
            }
            write_node(c, depth + 1, out);
        }
        out.push('\n');
        for _ in 0..depth {
            out.push(' ');
        }
    }
    out.push_str(&format!("</{}>", node.tag));
}

fn escape_text(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn escape_attr(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn unescape(s: &str) -> String {
    s.replace("&quot;", "\"")
        .replace("&gt;", ">")
        .replace("&lt;", "<")
        .replace("&#39;", "'")
        .replace("&amp;", "&")
}

#[derive(Debug, Error, PartialEq)]
pub enum HtmlParseError {
    #[error("unexpected end of input")]
    UnexpectedEof,
    #[error("malformed tag at byte {0}")]
    MalformedTag(usize),
    #[error("mismatched closing tag: expected </{expected}>, found </{found}>")]
    MismatchedClose { expected: String, found: String },
    #[error("trailing content after document root")]
    TrailingContent,
}

/// Parse the serializer's output back into a tree. Whitespace-only text runs
/// between elements are treated as formatting and dropped; `bid` and
/// `visible` attributes are restored onto the node fields.
pub fn parse_html(input: &str) -> Result<DomNode, HtmlParseError> {
    let mut parser = Parser { input, pos: 0 };
    parser.skip_ws();
    let node = parser.parse_node()?.ok_or(HtmlParseError::UnexpectedEof)?;
    parser.skip_ws();
    if parser.pos != parser.input.len() {
        return Err(HtmlParseError::TrailingContent);
    }
    Ok(node)
}

struct Parser<'a> {
    input: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn rest(&self) -> &'a str {
        &self.input[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.input.len() - trimmed.len();
    }

    fn parse_node(&mut self) -> Result<Option<DomNode>, HtmlParseError> {
        if !self.rest().starts_with('<') {
            return Ok(None);
        }
        let start = self.pos;
        self.pos += 1;
        let tag: String = self
            .rest()
            .chars()
            .take_while(|c| c.is_ascii_alphanumeric())
            .collect();
        if tag.is_empty() {
            return Err(HtmlParseError::MalformedTag(start));
        }
        self.pos += tag.len();
        let mut node = el(&tag);
        node.visible = false;
        loop {
            self.skip_ws();
            let rest = self.rest();
            if rest.starts_with("/>") {
                self.pos += 2;
                return Ok(Some(node));
            }
            if rest.starts_with('>') {
                self.pos += 1;
                break;
            }
            let (name, value) = self.parse_attr()?;
            match name.as_str() {
                "bid" => node.bid = Some(value.as_str().into()),
                "visible" => node.visible = true,
                _ => {
                    node.attrs.insert(name, value);
                }
            }
        }
        if VOID_TAGS.contains(&tag.as_str()) {
            return Ok(Some(node));
        }
        loop {
            if self.rest().starts_with("</") {
                self.pos += 2;
                let close: String = self
                    .rest()
                    .chars()
                    .take_while(|c| c.is_ascii_alphanumeric())
                    .collect();
                self.pos += close.len();
                if !self.rest().starts_with('>') {
                    return Err(HtmlParseError::MalformedTag(self.pos));
                }
                self.pos += 1;
                if close != tag {
                    return Err(HtmlParseError::MismatchedClose { expected: tag, found: close });
                }
                return Ok(Some(node));
            }
            if self.rest().starts_with('<') {
                match self.parse_node()? {
                    Some(child) => node.children.push(child),
                    None => return Err(HtmlParseError::MalformedTag(self.pos)),
                }
            } else {
                let end = self
                    .rest()
                    .find('<')
                    .ok_or(HtmlParseError::UnexpectedEof)?;
                let raw = &self.rest()[..end];
                self.pos += end;
                if !raw.trim().is_empty() {
                    node.children.push(text(unescape(raw)));
                }
            }
            if self.pos >= self.input.len() {
                return Err(HtmlParseError::UnexpectedEof);
            }
        }
    }

    fn parse_attr(&mut self) -> Result<(String, String), HtmlParseError> {
        let name: String = self
            .rest()
            .chars()
            .take_while(|c| c.is_ascii_alphanumeric() || *c == '-' || *c == '_')
            .collect();
        if name.is_empty() {
            return Err(HtmlParseError::MalformedTag(self.pos));
        }
        self.pos += name.len();
        if !self.rest().starts_with("=\"") {
            return Err(HtmlParseError::MalformedTag(self.pos));
        }
        self.pos += 2;
        let end = self
            .rest()
            .find('"')
            .ok_or(HtmlParseError::UnexpectedEof)?;
        let value = unescape(&self.rest()[..end]);
        self.pos += end + 1;
        Ok((name, value))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dom::layout::{compute_visibility, Viewport};
    use crate::dom::node::assign_bids;

    fn sample() -> DomNode {
        let mut tree = assign_bids(
            el("html")
                .child(
                    el("head").child(
                        el("meta")
                            .attr("content", "text/html; charset=utf-8")
                            .attr("http-equiv", "Content-Type"),
                    ).child(el("title").text_child(" HomePage-Wikipedia")),
                )
                .child(
                    el("body")
                        .child(el("h1").child(el("a").attr("href", "/").text_child("HomePage")))
                        .child(el("p").text_child("a \"quoted\" value & <tag>")),
                ),
        );
        compute_visibility(&mut tree, Viewport::default());
        tree
    }

    #[test]
    fn title_serialization_keeps_text_verbatim() {
        let html = to_html(&sample());
        assert!(html.contains("<title bid=\"4\"> HomePage-Wikipedia</title>"), "{html}");
    }

    #[test]
    fn bid_attribute_comes_first() {
        let html = to_html(&sample());
        assert!(html.contains("<meta bid=\"3\" content=\"text/html; charset=utf-8\" http-equiv=\"Content-Type\"/>"));
    }

    #[test]
    fn round_trip_is_idempotent() {
        let html = to_html(&sample());
        let reparsed = parse_html(&html).unwrap();
        assert_eq!(to_html(&reparsed), html);
    }

    #[test]
    fn quotes_and_angles_escape_correctly() {
        let tree = sample();
        let html = to_html(&tree);
        assert!(html.contains("a \"quoted\" value &amp; &lt;tag&gt;"));
        let reparsed = parse_html(&html).unwrap();
        let p = reparsed.walk().find(|n| n.tag == "p").unwrap();
        assert_eq!(p.children[0].text.as_deref(), Some("a \"quoted\" value & <tag>"));
    }

    #[test]
    fn mismatched_close_is_an_error() {
        assert!(matches!(
            parse_html("<div><p></div></p>"),
            Err(HtmlParseError::MismatchedClose { .. })
        ));
    }
}
