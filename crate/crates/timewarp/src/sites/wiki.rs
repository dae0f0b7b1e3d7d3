//! Wiki backend: substring-based title lookup, version-dependent.
//!
//! An exact (case-insensitive) title match always wins, in every version.
//! Versions with drop-down suggestions fall back to ranked substring matches
//! over titles; versions without them return a not-found result instead.

use crate::render::features;
use crate::types::{Site, Version};

use super::corpus::WikiCorpus;

pub const MAX_SUGGESTIONS: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WikiSearchResult {
    /// An article title equals the query (case-insensitive).
    DirectHit(String),
    /// Ranked substring matches, dropdown-capable versions only.
    Suggestions(Vec<String>),
    NotFound,
}

/// Substring suggestions for a query: case-insensitive containment over
/// titles, ranked by match position then lexicographically (case-insensitive).
pub fn suggestions(corpus: &WikiCorpus, query: &str) -> Vec<String> {
    let needle = query.to_lowercase();
    if needle.is_empty() {
        return Vec::new();
    }
    let mut hits: Vec<(usize, String, String)> = corpus
        .titles()
        .filter_map(|title| {
            let lower = title.to_lowercase();
            lower.find(&needle).map(|pos| (pos, lower, title.to_string()))
        })
        .collect();
    hits.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
    hits.into_iter()
        .map(|(_, _, title)| title)
        .take(MAX_SUGGESTIONS)
        .collect()
}

pub fn search(corpus: &WikiCorpus, query: &str, version: Version) -> WikiSearchResult {
    if let Some(article) = corpus.get(query.trim()) {
        return WikiSearchResult::DirectHit(article.title.clone());
    }
    if features(Site::Wiki, version).has_dropdown_suggestions {
        let hits = suggestions(corpus, query.trim());
        if hits.is_empty() {
            WikiSearchResult::NotFound
        } else {
            WikiSearchResult::Suggestions(hits)
        }
    } else {
        WikiSearchResult::NotFound
    }
}

/// Follow the first inline link of each article starting from `start` until a
/// title that does not exist in the corpus, returning the visited titles.
pub fn first_link_chain(corpus: &WikiCorpus, start: &str) -> Vec<String> {
    let mut chain = Vec::new();
    let mut current = start.to_string();
    while let Some(article) = corpus.get(&current) {
        if chain.contains(&article.title) {
            break;
        }
        chain.push(article.title.clone());
        match article.links.first() {
            Some((_, target)) => current = target.clone(),
            None => break,
        }
    }
    chain
}
