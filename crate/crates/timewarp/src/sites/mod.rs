//! Site backends: corpora, search indexes, and the shop order flow.

pub mod corpus;
pub mod news;
pub mod search;
pub mod shop;
pub mod wiki;

use std::path::Path;

pub use corpus::{
    Catalog, CorpusError, NewsArticle, NewsCorpus, Price, Product, WikiArticle, WikiCorpus,
    WikiSection,
};
pub use news::NewsSearch;
pub use search::{bm25_score_one, tokenize, Bm25Index, BM25_B, BM25_K1};
pub use shop::{
    confirmation_code, place_order, scored_text, OrderConfirmation, OrderSelection, ShopError,
    ShopSearch,
};
pub use wiki::{first_link_chain, WikiSearchResult};

/// All three corpora plus their search indexes, immutable after load and
/// shared read-only across episodes.
#[derive(Debug, Clone)]
pub struct Backends {
    pub wiki: WikiCorpus,
    pub news: NewsCorpus,
    pub catalog: Catalog,
    pub news_search: NewsSearch,
    pub shop_search: ShopSearch,
}

impl Backends {
    pub fn new(wiki: WikiCorpus, news: NewsCorpus, catalog: Catalog) -> Backends {
        let news_search = NewsSearch::build(&news);
        let shop_search = ShopSearch::build(&catalog);
        Backends {
            wiki,
            news,
            catalog,
            news_search,
            shop_search,
        }
    }

    pub fn load(
        wiki_path: &Path,
        news_path: &Path,
        catalog_path: &Path,
    ) -> Result<Backends, CorpusError> {
        Ok(Backends::new(
            WikiCorpus::load(wiki_path)?,
            NewsCorpus::load(news_path)?,
            Catalog::load(catalog_path)?,
        ))
    }
}
