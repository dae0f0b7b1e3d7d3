//! In-memory DOM representation, element-identifier assignment, abstract
//! layout/visibility, and serialization into the two textual observation
//! formats (HTML with bid attributes, accessibility tree).

pub mod axtree;
pub mod html;
pub mod layout;
pub mod node;
pub mod template;

pub use axtree::{parse_axtree, to_axtree, AxLine};
pub use html::{parse_html, to_html, HtmlParseError};
pub use layout::{compute_visibility, Viewport, CHARS_PER_LINE, PX_PER_UNIT, VIEWPORT_UNITS};
pub use node::{assign_bids, collapse_ws, el, text, AxRole, Bid, DomNode};
pub use template::{
    bindings, render, PageTemplate, SlotBindings, SlotValue, TemplateError, TemplateRegistry,
};
