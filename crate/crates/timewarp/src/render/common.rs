//! Shared chrome builders: the document shell per HTML flavor, the search
//! form (with placement, dropdown, and icon-gating variants), and result
//! pagination. Version-invariant page content always lives inside the
//! container marked `id="content"`; everything else is chrome.

use crate::dom::{el, text, DomNode};
use crate::types::Site;

use super::descriptor::ChromeDescriptor;
use super::features::{HtmlFlavor, SearchPlacement, VersionFeatures};

/// Everything a template needs beyond its content slots.
pub struct Chrome<'a> {
    pub site: Site,
    pub prefix: String,
    pub desc: &'a ChromeDescriptor,
    pub feat: &'a VersionFeatures,
}

/// Mutable page state the search form reflects.
#[derive(Debug, Clone, Default)]
pub struct SearchState {
    pub value: String,
    /// (display title, target href) pairs for the dropdown datalist.
    pub suggestions: Vec<(String, String)>,
    pub icon_open: bool,
    /// Path + query of the page being rendered, used as the icon's return target.
    pub page_url: String,
}

/// Shell a page body with masthead, nav, search form (placed per version),
/// and footer. `page_body` is everything page-specific; builders wrap their
/// version-invariant parts in [`content_container`] themselves.
pub fn document(
    chrome: &Chrome<'_>,
    page_title: &str,
    page_body: Vec<DomNode>,
    search: &SearchState,
) -> DomNode {
    let head = el("head")
        .child(
            el("meta")
                .attr("content", "text/html; charset=utf-8")
                .attr("http-equiv", "Content-Type"),
        )
        .child(el("title").text_child(format!(" {page_title}")));

    let masthead = masthead(chrome);
    let nav = nav(chrome);
    let form = search_form(chrome, search);
    let footer = footer(chrome);

    let mut body_children: Vec<DomNode> = Vec::new();
    body_children.push(masthead);
    body_children.push(nav);
    match chrome.feat.search_placement {
        SearchPlacement::Top => {
            body_children.push(form);
            body_children.extend(page_body);
        }
        SearchPlacement::Bottom => {
            body_children.extend(page_body);
            body_children.push(el("hr"));
            body_children.push(form);
        }
    }
    body_children.push(footer);

    let body = match chrome.feat.html_flavor {
        HtmlFlavor::Legacy => el("body")
            .attr("bgcolor", "#ffffff")
            .attr("link", "#0000cc")
            .children_from(body_children),
        _ => el("body").children_from(body_children),
    };
    el("html").child(head).child(body)
}

fn masthead(chrome: &Chrome<'_>) -> DomNode {
    let d = chrome.desc;
    let title_link = el("a")
        .attr("href", format!("{}/", chrome.prefix))
        .text_child(d.site_title.clone());
    match chrome.feat.html_flavor {
        HtmlFlavor::Legacy => {
            let mut cell = el("td").child(el("font").attr("size", "6").child(el("h1").child(title_link)));
            if !d.tagline.is_empty() {
                cell = cell.child(el("font").attr("size", "2").child(el("i").text_child(d.tagline.clone())));
            }
            el("table")
                .attr("border", "0")
                .attr("width", "100%")
                .attr("class", "masthead")
                .child(el("tr").child(cell))
        }
        HtmlFlavor::Transitional => {
            let mut div = el("div").attr("class", "masthead").child(el("h1").child(title_link));
            if !d.tagline.is_empty() {
                div = div.child(el("span").attr("class", "tagline").text_child(d.tagline.clone()));
            }
            div
        }
        HtmlFlavor::Modern => {
            let mut header = el("header").child(el("h1").child(title_link));
            if !d.tagline.is_empty() {
                header = header.child(el("p").text_child(d.tagline.clone()));
            }
            header
        }
    }
}

fn nav(chrome: &Chrome<'_>) -> DomNode {
    let mut links = vec![("Home", format!("{}/", chrome.prefix))];
    if chrome.site == Site::Shop {
        links.push(("Cart", format!("{}/cart", chrome.prefix)));
    }
    let mut items: Vec<DomNode> = Vec::new();
    for (i, (name, href)) in links.iter().enumerate() {
        if i > 0 {
            items.push(text(" | "));
        }
        items.push(el("a").attr("href", href.clone()).text_child(*name));
    }
    match chrome.feat.html_flavor {
        HtmlFlavor::Legacy => el("p").attr("class", "navbar").child(text("[ ")).children_from(items).child(text(" ]")),
        HtmlFlavor::Transitional => el("div").attr("class", "navbar").children_from(items),
        HtmlFlavor::Modern => el("nav").children_from(items),
    }
}

/// The search form. With icon-gated search the textbox is hidden until the
/// icon link has been followed once in the episode; with dropdown
/// suggestions a datalist of clickable options mirrors the current value.
pub fn search_form(chrome: &Chrome<'_>, search: &SearchState) -> DomNode {
    let d = chrome.desc;
    let action = format!("{}/search", chrome.prefix);

    let mut input = el("input").attr("name", "q");
    if !search.value.is_empty() {
        input = input.attr("value", search.value.clone());
    }
    if !d.search_placeholder.is_empty() {
        input = input.attr("placeholder", d.search_placeholder.clone());
    }
    if chrome.feat.has_dropdown_suggestions {
        input = input.attr("list", "search-suggestions");
    }
    let gated_closed = chrome.feat.icon_gated_search && !search.icon_open;
    if gated_closed {
        input = input.attr("hidden", "");
    }

    let mut form = el("form").attr("action", action).attr("class", "search").attr("method", "get");
    if chrome.feat.icon_gated_search {
        let return_to = crate::urlenc::encode_component(&search.page_url);
        form = form.child(
            el("a")
                .attr("class", "search-icon")
                .attr("href", format!("{}/open_search?return={}", chrome.prefix, return_to))
                .attr("aria-label", "Open search")
                .text_child("🔍"),
        );
    }
    if !d.search_label.is_empty() && !gated_closed {
        match chrome.feat.html_flavor {
            HtmlFlavor::Legacy => form = form.child(el("b").text_child(d.search_label.clone())).child(text(" ")),
            _ => form = form.child(el("label").text_child(d.search_label.clone())),
        }
    }
    form = form.child(input);
    if !gated_closed {
        let submit = el("input").attr("type", "submit").attr("value", d.search_button.clone());
        form = form.child(text(" ")).child(submit);
    }
    if chrome.feat.has_dropdown_suggestions && !search.suggestions.is_empty() {
        let options = search.suggestions.iter().map(|(title, href)| {
            el("option").attr("value", title.clone()).attr("data-href", href.clone()).text_child(title.clone())
        });
        form = form.child(el("datalist").attr("id", "search-suggestions").children_from(options));
    }
    form
}

/// The container for version-invariant content; the text inside is identical
/// across all six versions of a page.
pub fn content_container(chrome: &Chrome<'_>, content: Vec<DomNode>) -> DomNode {
    match chrome.feat.html_flavor {
        HtmlFlavor::Legacy => el("table")
            .attr("border", "0")
            .attr("width", "100%")
            .attr("cellpadding", "4")
            .child(el("tr").child(el("td").attr("id", "content").children_from(content))),
        HtmlFlavor::Transitional => el("div").attr("id", "content").children_from(content),
        HtmlFlavor::Modern => el("main").attr("id", "content").children_from(content),
    }
}

fn footer(chrome: &Chrome<'_>) -> DomNode {
    let d = chrome.desc;
    match chrome.feat.html_flavor {
        HtmlFlavor::Legacy => el("p")
            .attr("class", "footer")
            .child(el("font").attr("size", "1").text_child(d.footer.clone())),
        HtmlFlavor::Transitional => el("div").attr("class", "footer").text_child(d.footer.clone()),
        HtmlFlavor::Modern => el("footer").text_child(d.footer.clone()),
    }
}

/// "Page p of n" plus previous/next links for paginated result pages.
pub fn pagination(base_href: &str, page: usize, pages: usize) -> DomNode {
    let mut nodes: Vec<DomNode> = vec![text(format!("Page {page} of {pages}"))];
    if page > 1 {
        nodes.push(text(" "));
        nodes.push(
            el("a")
                .attr("href", format!("{base_href}&page={}", page - 1))
                .text_child("Previous page"),
        );
    }
    if page < pages {
        nodes.push(text(" "));
        nodes.push(
            el("a")
                .attr("href", format!("{base_href}&page={}", page + 1))
                .text_child("Next page"),
        );
    }
    el("p").attr("class", "pagination").children_from(nodes)
}
