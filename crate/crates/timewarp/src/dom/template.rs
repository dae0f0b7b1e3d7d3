//! Page templates and slot bindings. A template is registered per
//! (site, version, page kind) and builds a full DOM tree from named content
//! slots; rendering the same template with the same bindings is
//! byte-reproducible.

use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use super::node::DomNode;
use crate::types::{PageKind, Site, Version};

#[derive(Debug, Clone, PartialEq)]
pub enum SlotValue {
    Text(String),
    Node(DomNode),
    Nodes(Vec<DomNode>),
    /// Ordered (label, value) pairs, e.g. dropdown suggestions.
    Pairs(Vec<(String, String)>),
}

impl SlotValue {
    pub fn as_text(&self) -> Option<&str> {
        match self {
            SlotValue::Text(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_nodes(&self) -> &[DomNode] {
        match self {
            SlotValue::Nodes(nodes) => nodes,
            SlotValue::Node(node) => std::slice::from_ref(node),
            _ => &[],
        }
    }

    pub fn as_pairs(&self) -> &[(String, String)] {
        match self {
            SlotValue::Pairs(pairs) => pairs,
            _ => &[],
        }
    }
}

pub type SlotBindings = BTreeMap<String, SlotValue>;

/// Convenience constructor for bindings.
pub fn bindings(entries: impl IntoIterator<Item = (&'static str, SlotValue)>) -> SlotBindings {
    entries
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect()
}

type Builder = Arc<dyn Fn(&SlotBindings) -> DomNode + Send + Sync>;

#[derive(Clone)]
pub struct PageTemplate {
    pub site: Site,
    pub version: Version,
    pub kind: PageKind,
    pub required_slots: Vec<&'static str>,
    builder: Builder,
}

impl PageTemplate {
    pub fn new(
        site: Site,
        version: Version,
        kind: PageKind,
        required_slots: Vec<&'static str>,
        builder: impl Fn(&SlotBindings) -> DomNode + Send + Sync + 'static,
    ) -> Self {
        PageTemplate {
            site,
            version,
            kind,
            required_slots,
            builder: Arc::new(builder),
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum TemplateError {
    #[error("no template registered for {site} {version} {kind}")]
    UnknownTemplate {
        site: Site,
        version: Version,
        kind: PageKind,
    },
    #[error("missing slot: {0}")]
    MissingSlot(String),
}

/// Registry of all page templates, keyed by (site, version, page kind).
#[derive(Default, Clone)]
pub struct TemplateRegistry {
    templates: BTreeMap<(Site, Version, PageKind), PageTemplate>,
}

impl TemplateRegistry {
    pub fn register(&mut self, template: PageTemplate) {
        self.templates
            .insert((template.site, template.version, template.kind), template);
    }

    pub fn get(
        &self,
        site: Site,
        version: Version,
        kind: PageKind,
    ) -> Result<&PageTemplate, TemplateError> {
        self.templates
            .get(&(site, version, kind))
            .ok_or(TemplateError::UnknownTemplate { site, version, kind })
    }

    pub fn len(&self) -> usize {
        self.templates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.templates.is_empty()
    }
}

/// Build the DOM for a template. Bids are not assigned here; callers run
/// [`crate::dom::assign_bids`] on the result.
pub fn render(template: &PageTemplate, content: &SlotBindings) -> Result<DomNode, TemplateError> {
    for slot in &template.required_slots {
        if !content.contains_key(*slot) {
            return Err(TemplateError::MissingSlot((*slot).to_string()));
        }
    }
    Ok((template.builder)(content))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dom::node::el;

    fn dummy_template() -> PageTemplate {
        PageTemplate::new(
            Site::Wiki,
            Version::V1,
            PageKind::Home,
            vec!["title"],
            |slots| {
                let title = slots
                    .get("title")
                    .and_then(|s| s.as_text())
                    .unwrap_or_default();
                el("html").child(el("body").child(el("h1").text_child(title)))
            },
        )
    }

    #[test]
    fn missing_slot_is_an_error() {
        let t = dummy_template();
        let empty = SlotBindings::new();
        assert_eq!(
            render(&t, &empty),
            Err(TemplateError::MissingSlot("title".into()))
        );
    }

    #[test]
    fn unknown_template_is_an_error() {
        let reg = TemplateRegistry::default();
        assert!(matches!(
            reg.get(Site::Wiki, Version::V1, PageKind::Home),
            Err(TemplateError::UnknownTemplate { .. })
        ));
    }

    #[test]
    fn identical_inputs_render_identically() {
        let t = dummy_template();
        let slots = bindings([("title", SlotValue::Text("HomePage".into()))]);
        let a = render(&t, &slots).unwrap();
        let b = render(&t, &slots).unwrap();
        assert_eq!(a, b);
    }
}
