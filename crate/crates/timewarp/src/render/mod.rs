//! The per-version page renderers and the version-feature registry.

pub mod common;
pub mod descriptor;
pub mod features;
pub mod pages;
pub mod slots;

use std::sync::OnceLock;

use thiserror::Error;

use crate::dom::{self, DomNode, SlotBindings, TemplateError, TemplateRegistry};
use crate::types::{PageKind, Site, Version};

pub use common::SearchState;
pub use descriptor::{chrome, ChromeDescriptor};
pub use features::{features, HtmlFlavor, SearchPlacement, VersionFeatures};
pub use pages::{build_registry, url_prefix};

#[derive(Debug, Error, PartialEq)]
pub enum RenderError {
    #[error("unknown page kind {kind} for {site} {version}")]
    UnknownPageKind {
        site: Site,
        version: Version,
        kind: PageKind,
    },
    #[error(transparent)]
    Template(TemplateError),
}

/// The process-wide template registry; templates are pure, so sharing one
/// registry across sessions is safe.
pub fn registry() -> &'static TemplateRegistry {
    static REGISTRY: OnceLock<TemplateRegistry> = OnceLock::new();
    REGISTRY.get_or_init(build_registry)
}

/// Render a page of the given kind. The returned tree has no bids assigned
/// and no visibility computed; the caller owns both passes.
pub fn render_page(
    site: Site,
    version: Version,
    kind: PageKind,
    content: &SlotBindings,
) -> Result<DomNode, RenderError> {
    let template = registry().get(site, version, kind).map_err(|_| {
        RenderError::UnknownPageKind { site, version, kind }
    })?;
    dom::render(template, content).map_err(RenderError::Template)
}
