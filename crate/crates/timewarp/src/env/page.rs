//! Page identity, URL resolution, and rendering into concrete page states.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::dom::{assign_bids, compute_visibility, DomNode, SlotBindings, SlotValue, Viewport};
use crate::render::{self, slots, url_prefix};
use crate::sites::{news, shop, wiki, Backends};
use crate::types::{PageKind, Site, Version};

use super::session::UiState;
use super::url::SiteUrl;
use super::StepError;

/// What a tab is showing, independent of transient form/scroll state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum PageRef {
    Home { site: Site },
    WikiArticle { title: String },
    WikiResults { query: String },
    NewsArticle { id: String },
    NewsResults { query: String, page: usize },
    ShopProduct { id: String, chosen: BTreeMap<String, String> },
    ShopResults { query: String, page: usize },
    ShopCart,
    ShopConfirmation { id: String, chosen: BTreeMap<String, String> },
    NotFound { site: Site, message: String },
}

impl PageRef {
    pub fn site(&self) -> Site {
        match self {
            PageRef::Home { site } | PageRef::NotFound { site, .. } => *site,
            PageRef::WikiArticle { .. } | PageRef::WikiResults { .. } => Site::Wiki,
            PageRef::NewsArticle { .. } | PageRef::NewsResults { .. } => Site::News,
            PageRef::ShopProduct { .. }
            | PageRef::ShopResults { .. }
            | PageRef::ShopCart
            | PageRef::ShopConfirmation { .. } => Site::Shop,
        }
    }

    pub fn kind(&self) -> PageKind {
        match self {
            PageRef::Home { .. } => PageKind::Home,
            PageRef::WikiArticle { .. } => PageKind::Article,
            PageRef::NewsArticle { .. } => PageKind::Article,
            PageRef::WikiResults { .. } | PageRef::NewsResults { .. } | PageRef::ShopResults { .. } => {
                PageKind::SearchResults
            }
            PageRef::ShopProduct { .. } => PageKind::Product,
            PageRef::ShopCart => PageKind::Cart,
            PageRef::ShopConfirmation { .. } => PageKind::Confirmation,
            PageRef::NotFound { .. } => PageKind::NotFound,
        }
    }

    pub fn to_url(&self) -> SiteUrl {
        let mut url = SiteUrl::home(self.site());
        match self {
            PageRef::Home { .. } | PageRef::ShopCart | PageRef::NotFound { .. } => {
                if matches!(self, PageRef::ShopCart) {
                    url.segments = vec!["cart".into()];
                }
                if let PageRef::NotFound { message, .. } = self {
                    url.segments = vec!["not_found".into()];
                    url.query = vec![("message".into(), message.clone())];
                }
            }
            PageRef::WikiArticle { title } => {
                url.segments = vec!["article".into(), title.replace(' ', "_")];
            }
            PageRef::WikiResults { query } => {
                url.segments = vec!["search".into()];
                url.query = vec![("q".into(), query.clone())];
            }
            PageRef::NewsArticle { id } => {
                url.segments = vec!["article".into(), id.clone()];
            }
            PageRef::NewsResults { query, page } | PageRef::ShopResults { query, page } => {
                url.segments = vec!["search".into()];
                url.query = vec![("q".into(), query.clone())];
                if *page > 1 {
                    url.query.push(("page".into(), page.to_string()));
                }
            }
            PageRef::ShopProduct { id, chosen } => {
                url.segments = vec!["product".into(), id.clone()];
                url.query = chosen.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
            }
            PageRef::ShopConfirmation { id, chosen } => {
                url.segments = vec!["order".into(), id.clone()];
                url.query = chosen.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
            }
        }
        url
    }
}

/// Resolve a parsed URL into a renderable page. Unknown articles and products
/// resolve to not-found pages; an order URL with options missing is an
/// in-band error so the agent stays on the product page.
pub fn resolve_url(backends: &Backends, url: &SiteUrl) -> Result<PageRef, StepError> {
    let site = url.site;
    let seg = |i: usize| url.segments.get(i).map(|s| s.as_str()).unwrap_or("");
    match (site, seg(0)) {
        (_, "") => Ok(PageRef::Home { site }),
        (Site::Wiki, "article") => {
            let title = seg(1).replace('_', " ");
            match backends.wiki.get(&title) {
                Some(article) => Ok(PageRef::WikiArticle { title: article.title.clone() }),
                None => Ok(PageRef::NotFound {
                    site,
                    message: format!("No article named \"{title}\" exists."),
                }),
            }
        }
        (Site::Wiki, "search") => {
            let query = url.query_get("q").unwrap_or("").to_string();
            Ok(PageRef::WikiResults { query })
        }
        (Site::News, "article") => match backends.news.get(seg(1)) {
            Some(article) => Ok(PageRef::NewsArticle { id: article.id.clone() }),
            None => Ok(PageRef::NotFound {
                site,
                message: format!("No news article with id \"{}\" exists.", seg(1)),
            }),
        },
        (Site::News, "search") => Ok(PageRef::NewsResults {
            query: url.query_get("q").unwrap_or("").to_string(),
            page: url.query_get("page").and_then(|p| p.parse().ok()).unwrap_or(1),
        }),
        (Site::Shop, "search") => Ok(PageRef::ShopResults {
            query: url.query_get("q").unwrap_or("").to_string(),
            page: url.query_get("page").and_then(|p| p.parse().ok()).unwrap_or(1),
        }),
        (Site::Shop, "product") => {
            let id = seg(1).to_string();
            match backends.catalog.get(&id) {
                Some(product) => {
                    let mut chosen = BTreeMap::new();
                    for (k, v) in &url.query {
                        if k == "dismiss_ad" {
                            continue;
                        }
                        if product.options.contains_key(k) {
                            chosen.insert(k.clone(), v.clone());
                        }
                    }
                    Ok(PageRef::ShopProduct { id, chosen })
                }
                None => Ok(PageRef::NotFound {
                    site,
                    message: format!("No product with id \"{id}\" exists."),
                }),
            }
        }
        (Site::Shop, "order") => {
            let id = seg(1).to_string();
            let chosen = url
                .query
                .iter()
                .filter(|(k, _)| k != "dismiss_ad")
                .cloned()
                .collect();
            let cart = shop::OrderSelection { product_id: id.clone(), chosen };
            match shop::place_order(&backends.catalog, &cart) {
                Ok(_) => Ok(PageRef::ShopConfirmation { id, chosen: cart.chosen }),
                Err(shop::ShopError::MissingOption(name)) => Err(StepError::MissingOption(name)),
                Err(shop::ShopError::InvalidSelection(detail)) => {
                    Err(StepError::InvalidSelection(detail))
                }
                Err(shop::ShopError::UnknownProduct(_)) => Ok(PageRef::NotFound {
                    site,
                    message: format!("No product with id \"{id}\" exists."),
                }),
            }
        }
        (Site::Shop, "cart") => Ok(PageRef::ShopCart),
        _ => Ok(PageRef::NotFound {
            site,
            message: format!("No such page: /{}", url.segments.join("/")),
        }),
    }
}

/// The page a search submit lands on.
pub fn search_target(backends: &Backends, version: Version, site: Site, query: &str) -> PageRef {
    match site {
        Site::Wiki => match wiki::search(&backends.wiki, query, version) {
            wiki::WikiSearchResult::DirectHit(title) => PageRef::WikiArticle { title },
            wiki::WikiSearchResult::Suggestions(_) => {
                PageRef::WikiResults { query: query.to_string() }
            }
            wiki::WikiSearchResult::NotFound => PageRef::NotFound {
                site,
                message: format!("No article named \"{query}\" was found."),
            },
        },
        Site::News => PageRef::NewsResults { query: query.to_string(), page: 1 },
        Site::Shop => PageRef::ShopResults { query: query.to_string(), page: 1 },
    }
}

/// One tab's concrete display state: the page, its transient form/scroll
/// state, and the rendered tree.
#[derive(Debug, Clone, PartialEq)]
pub struct PageState {
    pub page: PageRef,
    pub url: SiteUrl,
    pub form_value: String,
    pub suggestions: Vec<String>,
    pub popup_active: bool,
    pub viewport: Viewport,
    pub focused: Option<String>,
    pub dom: DomNode,
    pub title: String,
    pub doc_height: f64,
}

impl PageState {
    /// Render a page. The popup flag is decided by the session at
    /// navigation time.
    pub fn build(
        backends: &Backends,
        version: Version,
        ui: &UiState,
        page: PageRef,
        popup_active: bool,
    ) -> PageState {
        let mut state = PageState {
            url: page.to_url(),
            page,
            form_value: String::new(),
            suggestions: Vec::new(),
            popup_active,
            viewport: Viewport::default(),
            focused: None,
            dom: crate::dom::el("html"),
            title: String::new(),
            doc_height: 0.0,
        };
        state.render(backends, version, ui);
        state
    }

    /// Re-render the DOM from current state, preserving scroll position.
    pub fn render(&mut self, backends: &Backends, version: Version, ui: &UiState) {
        let site = self.page.site();
        let prefix = url_prefix(site, version);
        let mut slots = self.content_slots(backends, version, &prefix);
        slots.insert("page_url".into(), SlotValue::Text(self.url.http_path(version)));
        if !self.form_value.is_empty() {
            slots.insert("search_value".into(), SlotValue::Text(self.form_value.clone()));
        }
        if ui.icon_open {
            slots.insert("search_open".into(), SlotValue::Text("1".into()));
        }
        if !self.suggestions.is_empty() {
            let pairs: Vec<(String, String)> = self
                .suggestions
                .iter()
                .map(|t| (t.clone(), render::pages::article_href(&prefix, t)))
                .collect();
            slots.insert("search_suggestions".into(), SlotValue::Pairs(pairs));
        }
        let tree = render::render_page(site, version, self.page.kind(), &slots)
            .expect("resolved pages always have a template");
        let mut tree = assign_bids(tree);
        self.doc_height = compute_visibility(&mut tree, self.viewport);
        self.title = tree
            .walk()
            .find(|n| n.tag == "title")
            .map(|n| n.content_text().trim().to_string())
            .unwrap_or_default();
        self.dom = tree;
    }

    fn content_slots(&self, backends: &Backends, version: Version, prefix: &str) -> SlotBindings {
        match &self.page {
            PageRef::Home { site } => match site {
                Site::Wiki => slots::wiki_home(&backends.wiki, prefix),
                Site::News => slots::news_home(&backends.news, prefix),
                Site::Shop => slots::shop_home(&backends.catalog, prefix),
            },
            PageRef::WikiArticle { title } => {
                let article = backends.wiki.get(title).expect("resolved article exists");
                slots::wiki_article(article, prefix)
            }
            PageRef::WikiResults { query } => {
                let hits = wiki::suggestions(&backends.wiki, query);
                slots::wiki_results(query, &hits, prefix)
            }
            PageRef::NewsArticle { id } => {
                let article = backends.news.get(id).expect("resolved article exists");
                slots::news_article(article)
            }
            PageRef::NewsResults { query, page } => {
                let ranked = backends.news_search.search(&backends.news, query);
                let (items, pages) = news::paginate(&ranked, *page);
                slots::news_results(query, items, (*page).clamp(1, pages), pages, prefix)
            }
            PageRef::ShopResults { query, page } => {
                let ranked = backends.shop_search.search(&backends.catalog, query);
                let (items, pages) = news::paginate(&ranked, *page);
                slots::shop_results(query, items, (*page).clamp(1, pages), pages, prefix)
            }
            PageRef::ShopProduct { id, chosen } => {
                let product = backends.catalog.get(id).expect("resolved product exists");
                let dismiss = if self.popup_active {
                    let mut url = self.page.to_url();
                    url.query.push(("dismiss_ad".into(), "1".into()));
                    Some(url.http_path(version))
                } else {
                    None
                };
                slots::product_page(product, chosen, dismiss, prefix)
            }
            PageRef::ShopCart => slots::cart(
                "Your cart is empty. Open a product page, choose the options, and press Buy Now.",
            ),
            PageRef::ShopConfirmation { id, chosen } => {
                let cart = shop::OrderSelection {
                    product_id: id.clone(),
                    chosen: chosen.clone(),
                };
                let conf = shop::place_order(&backends.catalog, &cart)
                    .expect("confirmation pages come from successful orders");
                slots::confirmation(&conf)
            }
            PageRef::NotFound { message, .. } => slots::not_found(message),
        }
    }

    /// Scroll by a pixel delta, recomputing visibility.
    pub fn scroll_by(&mut self, delta_y_px: f64) {
        self.viewport = self.viewport.scrolled(delta_y_px, self.doc_height);
        compute_visibility(&mut self.dom, self.viewport);
    }

    /// Scroll so the node with the given anchor id is at the top of the view.
    pub fn scroll_to_anchor(&mut self, anchor: &str) -> bool {
        let Some(node) = self.dom.walk().find(|n| n.get_attr("id") == Some(anchor)) else {
            return false;
        };
        let target = node.y;
        let max_scroll = (self.doc_height - self.viewport.height).max(0.0);
        self.viewport = Viewport {
            scroll_y: target.clamp(0.0, max_scroll),
            ..self.viewport
        };
        compute_visibility(&mut self.dom, self.viewport);
        true
    }

    pub fn popup_root(&self) -> Option<&DomNode> {
        self.dom.walk().find(|n| n.tag == "dialog")
    }
}
