//! Term-frequency search: the shared tokenizer and a BM25 inverted index.
//!
//! Scoring uses k1 = 1.2, b = 0.75 and the non-negative idf variant
//! `ln(1 + (N - df + 0.5) / (df + 0.5))`. Document length is the token count
//! of the scored field concatenation. Only documents with score > 0 are
//! returned; ties are broken by a caller-supplied key.

use std::collections::{BTreeMap, HashMap};

pub const BM25_K1: f64 = 1.2;
pub const BM25_B: f64 = 0.75;

/// Lowercase, split on non-alphanumerics, drop empty tokens. Shared verbatim
/// between the index and any oracle scorer so rankings are comparable.
pub fn tokenize(text: &str) -> Vec<String> {
    text.to_lowercase()
        .split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(|t| t.to_string())
        .collect()
}

#[derive(Debug, Clone)]
pub struct Bm25Index {
    /// term -> (doc ordinal -> term frequency)
    postings: HashMap<String, BTreeMap<usize, usize>>,
    doc_keys: Vec<String>,
    doc_lengths: Vec<usize>,
    avg_doc_length: f64,
}

impl Bm25Index {
    /// Build from (key, scored text) pairs. Keys keep insertion order as the
    /// doc ordinal; scoring never depends on that order.
    pub fn build<'a>(docs: impl IntoIterator<Item = (&'a str, String)>) -> Bm25Index {
        let mut postings: HashMap<String, BTreeMap<usize, usize>> = HashMap::new();
        let mut doc_keys = Vec::new();
        let mut doc_lengths = Vec::new();
        for (key, body) in docs {
            let ordinal = doc_keys.len();
            doc_keys.push(key.to_string());
            let tokens = tokenize(&body);
            doc_lengths.push(tokens.len());
            for token in tokens {
                *postings.entry(token).or_default().entry(ordinal).or_insert(0) += 1;
            }
        }
        let avg_doc_length = if doc_lengths.is_empty() {
            0.0
        } else {
            doc_lengths.iter().sum::<usize>() as f64 / doc_lengths.len() as f64
        };
        Bm25Index {
            postings,
            doc_keys,
            doc_lengths,
            avg_doc_length,
        }
    }

    pub fn doc_count(&self) -> usize {
        self.doc_keys.len()
    }

    /// Score every document with a positive BM25 score for `query`, returned
    /// as (key, score) with no particular order guarantee beyond determinism.
    pub fn score(&self, query: &str) -> Vec<(String, f64)> {
        let n = self.doc_count() as f64;
        if n == 0.0 {
            return Vec::new();
        }
        let mut scores: BTreeMap<usize, f64> = BTreeMap::new();
        for term in tokenize(query) {
            let Some(hits) = self.postings.get(&term) else {
                continue;
            };
            let df = hits.len() as f64;
            let idf = (1.0 + (n - df + 0.5) / (df + 0.5)).ln();
            for (&doc, &tf) in hits {
                let tf = tf as f64;
                let dl = self.doc_lengths[doc] as f64;
                let norm = tf * (BM25_K1 + 1.0)
                    / (tf + BM25_K1 * (1.0 - BM25_B + BM25_B * dl / self.avg_doc_length));
                *scores.entry(doc).or_insert(0.0) += idf * norm;
            }
        }
        scores
            .into_iter()
            .filter(|(_, s)| *s > 0.0)
            .map(|(doc, s)| (self.doc_keys[doc].clone(), s))
            .collect()
    }
}

/// Brute-force BM25 score of one document against a query, given the corpus
/// statistics. Used by oracle tests; must agree with [`Bm25Index::score`].
pub fn bm25_score_one(
    query: &str,
    doc_tokens: &[String],
    doc_freq: &HashMap<String, usize>,
    n_docs: usize,
    avg_doc_length: f64,
) -> f64 {
    let mut tf: HashMap<&str, usize> = HashMap::new();
    for t in doc_tokens {
        *tf.entry(t.as_str()).or_insert(0) += 1;
    }
    let n = n_docs as f64;
    let dl = doc_tokens.len() as f64;
    let mut score = 0.0;
    for term in tokenize(query) {
        let Some(&freq) = tf.get(term.as_str()) else {
            continue;
        };
        let df = *doc_freq.get(&term).unwrap_or(&0) as f64;
        let idf = (1.0 + (n - df + 0.5) / (df + 0.5)).ln();
        let freq = freq as f64;
        let norm = freq * (BM25_K1 + 1.0)
            / (freq + BM25_K1 * (1.0 - BM25_B + BM25_B * dl / avg_doc_length));
        score += idf * norm;
    }
    score
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokenizer_is_lowercase_alnum() {
        assert_eq!(tokenize("Sound-Bar, 150USD!"), vec!["sound", "bar", "150usd"]);
        assert_eq!(tokenize("  "), Vec::<String>::new());
    }

    #[test]
    fn empty_index_returns_nothing() {
        let index = Bm25Index::build(Vec::<(&str, String)>::new());
        assert!(index.score("anything").is_empty());
    }

    #[test]
    fn single_doc_matches_its_own_title_word() {
        let index = Bm25Index::build([("d1", "Morocco hunger strike".to_string())]);
        let scores = index.score("Morocco");
        assert_eq!(scores.len(), 1);
        assert!(scores[0].1 > 0.0);
    }

    #[test]
    fn no_token_overlap_means_empty() {
        let index = Bm25Index::build([("d1", "alpha beta".to_string())]);
        assert!(index.score("gamma").is_empty());
    }

    #[test]
    fn index_agrees_with_brute_force() {
        let docs: Vec<(&str, String)> = vec![
            ("a", "the quick brown fox jumps".to_string()),
            ("b", "quick quick fox".to_string()),
            ("c", "lazy dogs sleep all day".to_string()),
            ("d", "fox dens and fox tails".to_string()),
        ];
        let index = Bm25Index::build(docs.iter().map(|(k, v)| (*k, v.clone())));

        let mut doc_freq: HashMap<String, usize> = HashMap::new();
        let tokenized: Vec<(&str, Vec<String>)> =
            docs.iter().map(|(k, v)| (*k, tokenize(v))).collect();
        for (_, tokens) in &tokenized {
            let mut seen = std::collections::HashSet::new();
            for t in tokens {
                if seen.insert(t.clone()) {
                    *doc_freq.entry(t.clone()).or_insert(0) += 1;
                }
            }
        }
        let avg = tokenized.iter().map(|(_, t)| t.len()).sum::<usize>() as f64
            / tokenized.len() as f64;

        for query in ["quick fox", "lazy", "fox", "the day"] {
            let mut indexed: BTreeMap<String, f64> =
                index.score(query).into_iter().collect();
            for (key, tokens) in &tokenized {
                let expected = bm25_score_one(query, tokens, &doc_freq, docs.len(), avg);
                let got = indexed.remove(*key).unwrap_or(0.0);
                assert!((expected - got).abs() < 1e-12, "{query}/{key}: {expected} vs {got}");
            }
        }
    }
}
