//! Corpus record types and line-delimited loading.
//!
//! Corpus files are UTF-8 JSON Lines: one record per line with the fields of
//! the corresponding type. Wiki section bodies may embed inline links with
//! `[[Target]]` or `[[Target|anchor text]]` markup; the article's ordered
//! link list is derived from them at load time.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("parse error at line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("duplicate key: {0}")]
    DuplicateKey(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct WikiSection {
    pub heading: String,
    pub body: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct WikiArticle {
    pub title: String,
    pub sections: Vec<WikiSection>,
    #[serde(default)]
    pub related_pages: Vec<String>,
    /// Ordered (anchor text, target title) pairs, derived from section bodies.
    #[serde(skip)]
    pub links: Vec<(String, String)>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct NewsArticle {
    pub id: String,
    pub title: String,
    /// ISO 8601 calendar date, e.g. `2009-12-06`.
    pub published: String,
    pub body: String,
}

/// Decimal currency amount stored as integer cents to keep arithmetic exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Price(pub u64);

impl Price {
    pub fn from_cents(cents: u64) -> Price {
        Price(cents)
    }

    pub fn dollars(&self) -> f64 {
        self.0 as f64 / 100.0
    }
}

impl fmt::Display for Price {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "${}.{:02}", self.0 / 100, self.0 % 100)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Product {
    pub product_id: String,
    pub title: String,
    pub description: String,
    /// Price in cents.
    pub price: Price,
    #[serde(default)]
    pub attributes: BTreeMap<String, String>,
    /// Option name to the list of selectable variant values.
    #[serde(default)]
    pub options: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub image_ref: Option<String>,
}

/// Parse `[[Target]]` / `[[Target|anchor]]` markup out of a body string,
/// returning the display text and the ordered links.
pub fn parse_inline_links(body: &str) -> (String, Vec<(String, String)>) {
    let mut display = String::new();
    let mut links = Vec::new();
    let mut rest = body;
    while let Some(start) = rest.find("[[") {
        display.push_str(&rest[..start]);
        let after = &rest[start + 2..];
        match after.find("]]") {
            Some(end) => {
                let inner = &after[..end];
                let (target, anchor) = match inner.split_once('|') {
                    Some((t, a)) => (t.trim(), a.trim()),
                    None => (inner.trim(), inner.trim()),
                };
                if !target.is_empty() {
                    links.push((anchor.to_string(), target.to_string()));
                }
                display.push_str(anchor);
                rest = &after[end + 2..];
            }
            None => {
                display.push_str("[[");
                rest = after;
            }
        }
    }
    display.push_str(rest);
    (display, links)
}

fn validate_date(s: &str) -> bool {
    let parts: Vec<&str> = s.split('-').collect();
    if parts.len() != 3 {
        return false;
    }
    let (Ok(y), Ok(m), Ok(d)) = (
        parts[0].parse::<i32>(),
        parts[1].parse::<u32>(),
        parts[2].parse::<u32>(),
    ) else {
        return false;
    };
    if parts[0].len() != 4 || parts[1].len() != 2 || parts[2].len() != 2 {
        return false;
    }
    if !(1..=12).contains(&m) {
        return false;
    }
    let leap = (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
    let days = match m {
        1 | 3 | 5 | 7 | 8 | 10 | 12 => 31,
        4 | 6 | 9 | 11 => 30,
        2 if leap => 29,
        2 => 28,
        _ => unreachable!(),
    };
    (1..=days).contains(&d)
}

fn parse_lines<T, F>(content: &str, mut insert: F) -> Result<(), CorpusError>
where
    T: for<'de> Deserialize<'de>,
    F: FnMut(T, usize) -> Result<(), CorpusError>,
{
    for (idx, line) in content.lines().enumerate() {
        let lineno = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let record: T = serde_json::from_str(line).map_err(|e| CorpusError::Parse {
            line: lineno,
            reason: e.to_string(),
        })?;
        insert(record, lineno)?;
    }
    Ok(())
}

#[derive(Debug, Default, Clone)]
pub struct WikiCorpus {
    pub articles: BTreeMap<String, WikiArticle>,
    /// Case-insensitive title lookup.
    title_index: BTreeMap<String, String>,
}

impl WikiCorpus {
    pub fn from_jsonl(content: &str) -> Result<WikiCorpus, CorpusError> {
        let mut corpus = WikiCorpus::default();
        parse_lines::<WikiArticle, _>(content, |mut article, lineno| {
            if article.title.trim().is_empty() {
                return Err(CorpusError::Parse {
                    line: lineno,
                    reason: "empty title".to_string(),
                });
            }
            let mut links = Vec::new();
            for section in &article.sections {
                let (_, mut l) = parse_inline_links(&section.body);
                links.append(&mut l);
            }
            article.links = links;
            let key = article.title.to_lowercase();
            if corpus.title_index.contains_key(&key) {
                return Err(CorpusError::DuplicateKey(article.title.clone()));
            }
            corpus.title_index.insert(key, article.title.clone());
            corpus.articles.insert(article.title.clone(), article);
            Ok(())
        })?;
        Ok(corpus)
    }

    pub fn load(path: &Path) -> Result<WikiCorpus, CorpusError> {
        WikiCorpus::from_jsonl(&std::fs::read_to_string(path)?)
    }

    pub fn get(&self, title: &str) -> Option<&WikiArticle> {
        self.title_index
            .get(&title.to_lowercase())
            .and_then(|t| self.articles.get(t))
    }

    pub fn titles(&self) -> impl Iterator<Item = &str> {
        self.articles.keys().map(|s| s.as_str())
    }

    pub fn len(&self) -> usize {
        self.articles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.articles.is_empty()
    }
}

#[derive(Debug, Default, Clone)]
pub struct NewsCorpus {
    pub articles: BTreeMap<String, NewsArticle>,
}

impl NewsCorpus {
    pub fn from_jsonl(content: &str) -> Result<NewsCorpus, CorpusError> {
        let mut corpus = NewsCorpus::default();
        parse_lines::<NewsArticle, _>(content, |article, lineno| {
            if !validate_date(&article.published) {
                return Err(CorpusError::Parse {
                    line: lineno,
                    reason: format!("invalid date: {}", article.published),
                });
            }
            if corpus.articles.contains_key(&article.id) {
                return Err(CorpusError::DuplicateKey(article.id.clone()));
            }
            corpus.articles.insert(article.id.clone(), article);
            Ok(())
        })?;
        Ok(corpus)
    }

    pub fn load(path: &Path) -> Result<NewsCorpus, CorpusError> {
        NewsCorpus::from_jsonl(&std::fs::read_to_string(path)?)
    }

    pub fn get(&self, id: &str) -> Option<&NewsArticle> {
        self.articles.get(id)
    }

    pub fn len(&self) -> usize {
        self.articles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.articles.is_empty()
    }
}

#[derive(Debug, Default, Clone)]
pub struct Catalog {
    pub products: BTreeMap<String, Product>,
}

impl Catalog {
    pub fn from_jsonl(content: &str) -> Result<Catalog, CorpusError> {
        let mut catalog = Catalog::default();
        parse_lines::<Product, _>(content, |product, lineno| {
            for (name, values) in &product.options {
                if values.is_empty() {
                    return Err(CorpusError::Parse {
                        line: lineno,
                        reason: format!("option {name} has no values"),
                    });
                }
            }
            if catalog.products.contains_key(&product.product_id) {
                return Err(CorpusError::DuplicateKey(product.product_id.clone()));
            }
            catalog.products.insert(product.product_id.clone(), product);
            Ok(())
        })?;
        Ok(catalog)
    }

    pub fn load(path: &Path) -> Result<Catalog, CorpusError> {
        Catalog::from_jsonl(&std::fs::read_to_string(path)?)
    }

    pub fn get(&self, id: &str) -> Option<&Product> {
        self.products.get(id)
    }

    pub fn len(&self) -> usize {
        self.products.len()
    }

    pub fn is_empty(&self) -> bool {
        self.products.is_empty()
    }
}
