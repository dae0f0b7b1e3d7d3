//! News backend: BM25 relevance search over title and body, paginated.

use super::corpus::{NewsArticle, NewsCorpus};
use super::search::Bm25Index;

pub const PAGE_SIZE: usize = 10;

#[derive(Debug, Clone)]
pub struct NewsSearch {
    index: Bm25Index,
}

impl NewsSearch {
    pub fn build(corpus: &NewsCorpus) -> NewsSearch {
        let index = Bm25Index::build(
            corpus
                .articles
                .values()
                .map(|a| (a.id.as_str(), format!("{} {}", a.title, a.body))),
        );
        NewsSearch { index }
    }

    /// Ranked article ids with score > 0; ties broken by published date
    /// descending, then id ascending.
    pub fn search<'c>(&self, corpus: &'c NewsCorpus, query: &str) -> Vec<&'c NewsArticle> {
        let mut scored: Vec<(f64, &NewsArticle)> = self
            .index
            .score(query)
            .into_iter()
            .filter_map(|(id, score)| corpus.get(&id).map(|a| (score, a)))
            .collect();
        scored.sort_by(|a, b| {
            b.0.partial_cmp(&a.0)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then_with(|| b.1.published.cmp(&a.1.published))
                .then_with(|| a.1.id.cmp(&b.1.id))
        });
        scored.into_iter().map(|(_, a)| a).collect()
    }
}

/// Slice one page (1-based) out of a ranked result list.
pub fn paginate<T>(results: &[T], page: usize) -> (&[T], usize) {
    let pages = results.len().div_ceil(PAGE_SIZE).max(1);
    let page = page.clamp(1, pages);
    let start = (page - 1) * PAGE_SIZE;
    let end = (start + PAGE_SIZE).min(results.len());
    (&results[start..end], pages)
}
