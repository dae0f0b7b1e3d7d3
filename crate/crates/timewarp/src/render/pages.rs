//! The 18 site/version page template sets and their registration.
//!
//! Slot contract per page kind (T = Text, N = Nodes, P = Pairs):
//!
//! - every page (optional): `search_value` T, `search_suggestions` P,
//!   `search_open` T ("1" once the icon has been clicked), `page_url` T
//! - `home`: `featured` N
//! - `article` (wiki): `title` T, `toc` P (heading, anchor), `sections` N,
//!   `related` N
//! - `article` (news): `title` T, `published` T, `body` N
//! - `search_results`: `query` T, `results` N, `page` T, `pages` T
//! - `product`: `title` T, `price` T, `description` T, `attributes` P,
//!   `options` N, `buy_href` T, `popup` Node (optional)
//! - `cart`: `message` T
//! - `confirmation`: `product_title` T, `code` T, `chosen` P
//! - `not_found`: `message` T

use crate::dom::{el, DomNode, PageTemplate, SlotBindings, SlotValue, TemplateRegistry};
use crate::types::{PageKind, Site, Version};

use super::common::{content_container, document, pagination, Chrome, SearchState};
use super::descriptor::chrome as chrome_descriptor;
use super::features::features;

pub fn url_prefix(site: Site, version: Version) -> String {
    format!("/{}/{}", version.name(), site.name())
}

fn get_text(slots: &SlotBindings, name: &str) -> String {
    slots
        .get(name)
        .and_then(|s| s.as_text())
        .unwrap_or_default()
        .to_string()
}

fn get_nodes(slots: &SlotBindings, name: &str) -> Vec<DomNode> {
    slots.get(name).map(|s| s.as_nodes().to_vec()).unwrap_or_default()
}

fn get_pairs(slots: &SlotBindings, name: &str) -> Vec<(String, String)> {
    slots.get(name).map(|s| s.as_pairs().to_vec()).unwrap_or_default()
}

fn search_state(slots: &SlotBindings) -> SearchState {
    SearchState {
        value: get_text(slots, "search_value"),
        suggestions: get_pairs(slots, "search_suggestions"),
        icon_open: get_text(slots, "search_open") == "1",
        page_url: get_text(slots, "page_url"),
    }
}

fn with_chrome<F>(site: Site, version: Version, build: F) -> impl Fn(&SlotBindings) -> DomNode
where
    F: Fn(&Chrome<'_>, &SlotBindings) -> (String, Vec<DomNode>),
{
    move |slots| {
        let desc = chrome_descriptor(site, version);
        let chrome = Chrome {
            site,
            prefix: url_prefix(site, version),
            desc: &desc,
            feat: features(site, version),
        };
        let (title, body) = build(&chrome, slots);
        document(&chrome, &title, body, &search_state(slots))
    }
}

fn home_template(site: Site, version: Version) -> PageTemplate {
    PageTemplate::new(
        site,
        version,
        PageKind::Home,
        vec!["featured"],
        with_chrome(site, version, move |chrome, slots| {
            let d = chrome.desc;
            let body = vec![
                el("p").attr("class", "welcome").text_child(d.welcome.clone()),
                el("h2").text_child(d.featured_heading.clone()),
                content_container(chrome, vec![el("ul").children_from(get_nodes(slots, "featured"))]),
            ];
            (d.site_title.clone(), body)
        }),
    )
}

fn wiki_article_template(version: Version) -> PageTemplate {
    let site = Site::Wiki;
    PageTemplate::new(
        site,
        version,
        PageKind::Article,
        vec!["title", "sections", "related"],
        with_chrome(site, version, move |chrome, slots| {
            let title = get_text(slots, "title");
            let mut body: Vec<DomNode> = Vec::new();
            if chrome.feat.has_toc {
                let toc_entries = get_pairs(slots, "toc");
                if !toc_entries.is_empty() {
                    let items = toc_entries.iter().map(|(heading, anchor)| {
                        el("li").child(el("a").attr("href", format!("#{anchor}")).text_child(heading.clone()))
                    });
                    body.push(
                        el("div")
                            .attr("class", "toc")
                            .child(el("h2").text_child("Contents"))
                            .child(el("ul").children_from(items)),
                    );
                }
            }
            let mut content: Vec<DomNode> = vec![el("h1").text_child(title.clone())];
            content.extend(get_nodes(slots, "sections"));
            let related = get_nodes(slots, "related");
            if !related.is_empty() {
                content.push(el("h2").text_child("Related Pages"));
                content.push(el("ul").children_from(related));
            }
            body.push(content_container(chrome, content));
            (format!("{} - {}", title, chrome.desc.site_title), body)
        }),
    )
}

fn news_article_template(version: Version) -> PageTemplate {
    let site = Site::News;
    PageTemplate::new(
        site,
        version,
        PageKind::Article,
        vec!["title", "published", "body"],
        with_chrome(site, version, move |chrome, slots| {
            let title = get_text(slots, "title");
            let mut content: Vec<DomNode> = vec![
                el("h1").text_child(title.clone()),
                el("p").attr("class", "dateline").text_child(format!("Published: {}", get_text(slots, "published"))),
            ];
            content.extend(get_nodes(slots, "body"));
            let body = vec![content_container(chrome, content)];
            (format!("{} - {}", title, chrome.desc.site_title), body)
        }),
    )
}

fn search_results_template(site: Site, version: Version) -> PageTemplate {
    PageTemplate::new(
        site,
        version,
        PageKind::SearchResults,
        vec!["query", "results"],
        with_chrome(site, version, move |chrome, slots| {
            let query = get_text(slots, "query");
            let results = get_nodes(slots, "results");
            let count = results.len();
            let mut body: Vec<DomNode> = vec![el("h2").text_child(match site {
                Site::Wiki => format!("Search results for \"{query}\""),
                Site::News => format!("Results for \"{query}\""),
                Site::Shop => format!("Results for \"{query}\""),
            })];
            if count == 0 {
                body.push(content_container(
                    chrome,
                    vec![el("p").text_child("No results found.")],
                ));
            } else {
                body.push(content_container(chrome, vec![el("ul").attr("class", "results").children_from(results)]));
            }
            let page: usize = get_text(slots, "page").parse().unwrap_or(1);
            let pages: usize = get_text(slots, "pages").parse().unwrap_or(1);
            if site != Site::Wiki && count > 0 {
                let base = format!(
                    "{}/search?q={}",
                    chrome.prefix,
                    crate::urlenc::encode_component(&query)
                );
                body.push(pagination(&base, page, pages));
            }
            (format!("Search: {query}"), body)
        }),
    )
}

fn product_template(version: Version) -> PageTemplate {
    let site = Site::Shop;
    PageTemplate::new(
        site,
        version,
        PageKind::Product,
        vec!["title", "price", "description", "options", "buy_href"],
        with_chrome(site, version, move |chrome, slots| {
            let title = get_text(slots, "title");
            let mut content: Vec<DomNode> = vec![
                el("h1").text_child(title.clone()),
                el("p").attr("class", "price").text_child(format!("Price: {}", get_text(slots, "price"))),
            ];
            if let Some(SlotValue::Node(image)) = slots.get("image") {
                content.push(image.clone());
            }
            let attrs = get_pairs(slots, "attributes");
            if !attrs.is_empty() {
                content.push(el("h2").text_child("Product details"));
                let rows = attrs.iter().map(|(k, v)| {
                    el("tr")
                        .child(el("th").text_child(k.clone()))
                        .child(el("td").text_child(v.clone()))
                });
                content.push(el("table").attr("class", "attributes").children_from(rows));
            }
            content.extend(get_nodes(slots, "options"));
            content.push(el("h2").text_child("Description"));
            content.push(el("p").text_child(get_text(slots, "description")));
            content.push(
                el("p").attr("class", "buy").child(
                    el("a")
                        .attr("class", "buy-now")
                        .attr("href", get_text(slots, "buy_href"))
                        .text_child("Buy Now"),
                ),
            );
            let mut body = vec![content_container(chrome, content)];
            if let Some(SlotValue::Node(popup)) = slots.get("popup") {
                body.push(popup.clone());
            }
            (format!("{} - {}", title, chrome.desc.site_title), body)
        }),
    )
}

fn cart_template(version: Version) -> PageTemplate {
    let site = Site::Shop;
    PageTemplate::new(
        site,
        version,
        PageKind::Cart,
        vec!["message"],
        with_chrome(site, version, move |chrome, slots| {
            let body = vec![
                el("h1").text_child("Your Cart"),
                content_container(chrome, vec![el("p").text_child(get_text(slots, "message"))]),
            ];
            (format!("Cart - {}", chrome.desc.site_title), body)
        }),
    )
}

fn confirmation_template(version: Version) -> PageTemplate {
    let site = Site::Shop;
    PageTemplate::new(
        site,
        version,
        PageKind::Confirmation,
        vec!["product_title", "code"],
        with_chrome(site, version, move |chrome, slots| {
            let code = get_text(slots, "code");
            let chosen = get_pairs(slots, "chosen");
            let mut content: Vec<DomNode> = vec![
                el("h1").text_child("Order placed"),
                el("p").text_child(format!("Thank you! Your order for {} is confirmed.", get_text(slots, "product_title"))),
            ];
            if !chosen.is_empty() {
                let items = chosen
                    .iter()
                    .map(|(k, v)| el("li").text_child(format!("{k}: {v}")));
                content.push(el("ul").attr("class", "chosen-options").children_from(items));
            }
            content.push(
                el("p")
                    .attr("class", "confirmation-code")
                    .text_child(format!("Confirmation code: {code}")),
            );
            let body = vec![content_container(chrome, content)];
            (format!("Order confirmed - {}", chrome.desc.site_title), body)
        }),
    )
}

fn not_found_template(site: Site, version: Version) -> PageTemplate {
    PageTemplate::new(
        site,
        version,
        PageKind::NotFound,
        vec!["message"],
        with_chrome(site, version, move |chrome, slots| {
            let body = vec![
                el("h1").text_child("Not found"),
                content_container(chrome, vec![el("p").text_child(get_text(slots, "message"))]),
            ];
            ("Not found".to_string(), body)
        }),
    )
}

/// Build the full template registry: every page kind each site serves, for
/// all six versions.
pub fn build_registry() -> TemplateRegistry {
    let mut registry = TemplateRegistry::default();
    for version in Version::ALL {
        for site in Site::ALL {
            registry.register(home_template(site, version));
            registry.register(search_results_template(site, version));
            registry.register(not_found_template(site, version));
        }
        registry.register(wiki_article_template(version));
        registry.register(news_article_template(version));
        registry.register(product_template(version));
        registry.register(cart_template(version));
        registry.register(confirmation_template(version));
    }
    registry
}

/// The popup-ad overlay shown on a shop v5 product page until dismissed. The
/// dismiss link re-renders the same page without the overlay.
pub fn popup_overlay(dismiss_href: &str) -> DomNode {
    el("dialog")
        .attr("class", "popup-ad")
        .attr("open", "")
        .child(el("h2").text_child("Limited time offer!"))
        .child(el("p").text_child(
            "Download our app now and get 90% off your first order. Hurry, this deal expires in 5 minutes!",
        ))
        .child(
            el("p").child(
                el("a")
                    .attr("class", "dismiss-ad")
                    .attr("href", dismiss_href)
                    .text_child("✕ No thanks, close this"),
            ),
        )
}

/// List item linking to a wiki article.
pub fn wiki_link_item(prefix: &str, title: &str) -> DomNode {
    el("li").child(el("a").attr("href", article_href(prefix, title)).text_child(title))
}

pub fn article_href(prefix: &str, title: &str) -> String {
    format!(
        "{}/article/{}",
        prefix,
        crate::urlenc::encode_component(&title.replace(' ', "_"))
    )
}

pub fn news_article_href(prefix: &str, id: &str) -> String {
    format!("{}/article/{}", prefix, crate::urlenc::encode_component(id))
}

pub fn product_href(prefix: &str, id: &str, chosen: &std::collections::BTreeMap<String, String>) -> String {
    let base = format!("{}/product/{}", prefix, crate::urlenc::encode_component(id));
    if chosen.is_empty() {
        base
    } else {
        let query = crate::urlenc::encode_query(chosen.iter().map(|(k, v)| (k.as_str(), v.as_str())));
        format!("{base}?{query}")
    }
}

pub fn order_href(prefix: &str, id: &str, chosen: &std::collections::BTreeMap<String, String>) -> String {
    let base = format!("{}/order/{}", prefix, crate::urlenc::encode_component(id));
    if chosen.is_empty() {
        base
    } else {
        let query = crate::urlenc::encode_query(chosen.iter().map(|(k, v)| (k.as_str(), v.as_str())));
        format!("{base}?{query}")
    }
}

pub fn search_href(prefix: &str, query: &str, page: usize) -> String {
    let mut href = format!("{}/search?q={}", prefix, crate::urlenc::encode_component(query));
    if page > 1 {
        href.push_str(&format!("&page={page}"));
    }
    href
}
