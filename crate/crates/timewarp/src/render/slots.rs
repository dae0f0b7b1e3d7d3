//! Builders that turn backend records into the slot bindings each page
//! template consumes. Content built here is version-invariant; the version
//! only picks which chrome wraps it.

use std::collections::BTreeMap;

use crate::dom::{el, text, DomNode, SlotBindings, SlotValue};
use crate::sites::corpus::{parse_inline_links, NewsArticle, Product, WikiArticle};
use crate::sites::shop::OrderConfirmation;
use crate::sites::{Catalog, NewsCorpus, WikiCorpus};

use super::pages::{article_href, news_article_href, popup_overlay, product_href, order_href, wiki_link_item};

pub const FEATURED_COUNT: usize = 8;

fn put_text(slots: &mut SlotBindings, name: &str, value: impl Into<String>) {
    slots.insert(name.to_string(), SlotValue::Text(value.into()));
}

fn put_nodes(slots: &mut SlotBindings, name: &str, nodes: Vec<DomNode>) {
    slots.insert(name.to_string(), SlotValue::Nodes(nodes));
}

fn put_pairs(slots: &mut SlotBindings, name: &str, pairs: Vec<(String, String)>) {
    slots.insert(name.to_string(), SlotValue::Pairs(pairs));
}

pub fn wiki_home(corpus: &WikiCorpus, prefix: &str) -> SlotBindings {
    let mut slots = SlotBindings::new();
    let featured: Vec<DomNode> = corpus
        .titles()
        .take(FEATURED_COUNT)
        .map(|t| wiki_link_item(prefix, t))
        .collect();
    put_nodes(&mut slots, "featured", featured);
    slots
}

/// Slug used for section anchors: lowercase with dashes.
pub fn anchor_slug(heading: &str) -> String {
    let mut slug = String::new();
    for c in heading.to_lowercase().chars() {
        if c.is_alphanumeric() {
            slug.push(c);
        } else if !slug.ends_with('-') && !slug.is_empty() {
            slug.push('-');
        }
    }
    slug.trim_end_matches('-').to_string()
}

/// Body text with `[[...]]` markup expanded into inline links.
fn body_nodes(body: &str, prefix: &str) -> Vec<DomNode> {
    let (_, links) = parse_inline_links(body);
    let mut nodes = Vec::new();
    let mut rest = body;
    let mut link_iter = links.iter();
    while let Some(start) = rest.find("[[") {
        if start > 0 {
            nodes.push(text(&rest[..start]));
        }
        let after = &rest[start + 2..];
        match after.find("]]") {
            Some(end) => {
                if let Some((anchor, target)) = link_iter.next() {
                    nodes.push(
                        el("a")
                            .attr("href", article_href(prefix, target))
                            .text_child(anchor.clone()),
                    );
                }
                rest = &after[end + 2..];
            }
            None => {
                nodes.push(text("[["));
                rest = after;
            }
        }
    }
    if !rest.is_empty() {
        nodes.push(text(rest));
    }
    nodes
}

pub fn wiki_article(article: &WikiArticle, prefix: &str) -> SlotBindings {
    let mut slots = SlotBindings::new();
    put_text(&mut slots, "title", &article.title);
    let toc: Vec<(String, String)> = article
        .sections
        .iter()
        .map(|s| (s.heading.clone(), anchor_slug(&s.heading)))
        .collect();
    put_pairs(&mut slots, "toc", toc);
    let mut sections = Vec::new();
    for section in &article.sections {
        sections.push(
            el("h2")
                .attr("id", anchor_slug(&section.heading))
                .text_child(section.heading.clone()),
        );
        for para in section.body.split("\n\n") {
            sections.push(el("p").children_from(body_nodes(para, prefix)));
        }
    }
    put_nodes(&mut slots, "sections", sections);
    let related: Vec<DomNode> = article
        .related_pages
        .iter()
        .map(|t| wiki_link_item(prefix, t))
        .collect();
    put_nodes(&mut slots, "related", related);
    slots
}

pub fn wiki_results(query: &str, suggestions: &[String], prefix: &str) -> SlotBindings {
    let mut slots = SlotBindings::new();
    put_text(&mut slots, "query", query);
    let results: Vec<DomNode> = suggestions.iter().map(|t| wiki_link_item(prefix, t)).collect();
    put_nodes(&mut slots, "results", results);
    slots
}

pub fn news_home(corpus: &NewsCorpus, prefix: &str) -> SlotBindings {
    let mut slots = SlotBindings::new();
    let mut latest: Vec<&NewsArticle> = corpus.articles.values().collect();
    latest.sort_by(|a, b| b.published.cmp(&a.published).then_with(|| a.id.cmp(&b.id)));
    let featured: Vec<DomNode> = latest
        .iter()
        .take(FEATURED_COUNT)
        .map(|a| news_item(a, prefix))
        .collect();
    put_nodes(&mut slots, "featured", featured);
    slots
}

pub fn news_item(article: &NewsArticle, prefix: &str) -> DomNode {
    el("li")
        .child(
            el("a")
                .attr("href", news_article_href(prefix, &article.id))
                .text_child(article.title.clone()),
        )
        .text_child(format!(" ({})", article.published))
}

pub fn news_article(article: &NewsArticle) -> SlotBindings {
    let mut slots = SlotBindings::new();
    put_text(&mut slots, "title", &article.title);
    put_text(&mut slots, "published", &article.published);
    let body: Vec<DomNode> = article
        .body
        .split("\n\n")
        .map(|para| el("p").text_child(para))
        .collect();
    put_nodes(&mut slots, "body", body);
    slots
}

pub fn news_results(
    query: &str,
    items: &[&NewsArticle],
    page: usize,
    pages: usize,
    prefix: &str,
) -> SlotBindings {
    let mut slots = SlotBindings::new();
    put_text(&mut slots, "query", query);
    put_text(&mut slots, "page", page.to_string());
    put_text(&mut slots, "pages", pages.to_string());
    let results: Vec<DomNode> = items.iter().map(|a| news_item(a, prefix)).collect();
    put_nodes(&mut slots, "results", results);
    slots
}

pub fn shop_home(catalog: &Catalog, prefix: &str) -> SlotBindings {
    let mut slots = SlotBindings::new();
    let featured: Vec<DomNode> = catalog
        .products
        .values()
        .take(FEATURED_COUNT)
        .map(|p| product_item(p, prefix))
        .collect();
    put_nodes(&mut slots, "featured", featured);
    slots
}

pub fn product_item(product: &Product, prefix: &str) -> DomNode {
    el("li")
        .child(
            el("a")
                .attr("href", product_href(prefix, &product.product_id, &BTreeMap::new()))
                .text_child(product.title.clone()),
        )
        .text_child(format!(" — {}", product.price))
}

pub fn shop_results(
    query: &str,
    items: &[&Product],
    page: usize,
    pages: usize,
    prefix: &str,
) -> SlotBindings {
    let mut slots = SlotBindings::new();
    put_text(&mut slots, "query", query);
    put_text(&mut slots, "page", page.to_string());
    put_text(&mut slots, "pages", pages.to_string());
    let results: Vec<DomNode> = items.iter().map(|p| product_item(p, prefix)).collect();
    put_nodes(&mut slots, "results", results);
    slots
}

pub fn product_page(
    product: &Product,
    chosen: &BTreeMap<String, String>,
    popup_dismiss_href: Option<String>,
    prefix: &str,
) -> SlotBindings {
    let mut slots = SlotBindings::new();
    put_text(&mut slots, "title", &product.title);
    put_text(&mut slots, "price", product.price.to_string());
    put_text(&mut slots, "description", &product.description);
    put_pairs(
        &mut slots,
        "attributes",
        product.attributes.iter().map(|(k, v)| (k.clone(), v.clone())).collect(),
    );
    if let Some(image_ref) = &product.image_ref {
        slots.insert(
            "image".to_string(),
            SlotValue::Node(
                el("img")
                    .attr("src", format!("/assets/{image_ref}"))
                    .attr("alt", format!("Product photo: {}", product.title)),
            ),
        );
    }

    let mut option_nodes: Vec<DomNode> = Vec::new();
    for (name, values) in &product.options {
        let mut items: Vec<DomNode> = Vec::new();
        for value in values {
            let selected = chosen.get(name) == Some(value);
            if selected {
                items.push(el("li").child(el("b").text_child(format!("{value} (selected)"))));
            } else {
                let mut next = chosen.clone();
                next.insert(name.clone(), value.clone());
                items.push(
                    el("li").child(
                        el("a")
                            .attr("class", "option-value")
                            .attr("href", product_href(prefix, &product.product_id, &next))
                            .text_child(value.clone()),
                    ),
                );
            }
        }
        option_nodes.push(
            el("div")
                .attr("class", "option-group")
                .child(el("h2").text_child(format!("Choose {name}")))
                .child(el("ul").children_from(items)),
        );
    }
    put_nodes(&mut slots, "options", option_nodes);
    put_text(&mut slots, "buy_href", order_href(prefix, &product.product_id, chosen));
    if let Some(dismiss) = popup_dismiss_href {
        slots.insert("popup".to_string(), SlotValue::Node(popup_overlay(&dismiss)));
    }
    slots
}

pub fn confirmation(conf: &OrderConfirmation) -> SlotBindings {
    let mut slots = SlotBindings::new();
    put_text(&mut slots, "product_title", &conf.product_title);
    put_text(&mut slots, "code", &conf.code);
    put_pairs(
        &mut slots,
        "chosen",
        conf.chosen.iter().map(|(k, v)| (k.clone(), v.clone())).collect(),
    );
    slots
}

pub fn cart(message: &str) -> SlotBindings {
    let mut slots = SlotBindings::new();
    put_text(&mut slots, "message", message);
    slots
}

pub fn not_found(message: &str) -> SlotBindings {
    let mut slots = SlotBindings::new();
    put_text(&mut slots, "message", message);
    slots
}
