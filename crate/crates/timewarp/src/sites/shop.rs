//! Shop backend: BM25 product search, order selections, and deterministic
//! confirmation codes.
//!
//! The confirmation code is the first 10 hex digits (uppercase) of
//! SHA-256 over `product_id 0x1f opt=val 0x1f opt=val ...` with the chosen
//! options sorted by name, so option order never changes the code.

use std::collections::BTreeMap;

use sha2::{Digest, Sha256};
use thiserror::Error;

use super::corpus::{Catalog, Product};
use super::search::Bm25Index;

pub const PAGE_SIZE: usize = 10;
pub const CODE_LEN: usize = 10;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ShopError {
    #[error("unknown product: {0}")]
    UnknownProduct(String),
    #[error("invalid selection: {0}")]
    InvalidSelection(String),
    #[error("missing option: {0}")]
    MissingOption(String),
}

/// A product plus the chosen value for each of its options.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderSelection {
    pub product_id: String,
    pub chosen: BTreeMap<String, String>,
}

impl OrderSelection {
    pub fn new(product_id: impl Into<String>) -> OrderSelection {
        OrderSelection {
            product_id: product_id.into(),
            chosen: BTreeMap::new(),
        }
    }

    pub fn choose(mut self, option: impl Into<String>, value: impl Into<String>) -> Self {
        self.chosen.insert(option.into(), value.into());
        self
    }

    /// Every chosen value must be one of the product's declared values.
    pub fn validate(&self, product: &Product) -> Result<(), ShopError> {
        for (name, value) in &self.chosen {
            match product.options.get(name) {
                Some(values) if values.contains(value) => {}
                Some(_) => {
                    return Err(ShopError::InvalidSelection(format!(
                        "{name} has no value {value}"
                    )))
                }
                None => {
                    return Err(ShopError::InvalidSelection(format!(
                        "product has no option {name}"
                    )))
                }
            }
        }
        Ok(())
    }
}

/// 10-character uppercase hexadecimal code, a pure function of the product id
/// and the canonicalized chosen-option map.
pub fn confirmation_code(sel: &OrderSelection) -> String {
    let mut hasher = Sha256::new();
    hasher.update(sel.product_id.as_bytes());
    for (name, value) in &sel.chosen {
        hasher.update([0x1f]);
        hasher.update(format!("{name}={value}").as_bytes());
    }
    let digest = hasher.finalize();
    let hex: String = digest.iter().map(|b| format!("{b:02X}")).collect();
    hex[..CODE_LEN].to_string()
}

/// A completed order, rendered by the confirmation page.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderConfirmation {
    pub product_id: String,
    pub product_title: String,
    pub chosen: BTreeMap<String, String>,
    pub code: String,
}

/// Validate the cart and produce the confirmation record. All of the
/// product's options must have a chosen value.
pub fn place_order(catalog: &Catalog, cart: &OrderSelection) -> Result<OrderConfirmation, ShopError> {
    let product = catalog
        .get(&cart.product_id)
        .ok_or_else(|| ShopError::UnknownProduct(cart.product_id.clone()))?;
    cart.validate(product)?;
    for name in product.options.keys() {
        if !cart.chosen.contains_key(name) {
            return Err(ShopError::MissingOption(name.clone()));
        }
    }
    Ok(OrderConfirmation {
        product_id: product.product_id.clone(),
        product_title: product.title.clone(),
        chosen: cart.chosen.clone(),
        code: confirmation_code(cart),
    })
}

#[derive(Debug, Clone)]
pub struct ShopSearch {
    index: Bm25Index,
}

impl ShopSearch {
    pub fn build(catalog: &Catalog) -> ShopSearch {
        let index = Bm25Index::build(catalog.products.values().map(|p| {
            (p.product_id.as_str(), scored_text(p))
        }));
        ShopSearch { index }
    }

    /// Ranked products with score > 0; ties broken by product_id.
    pub fn search<'c>(&self, catalog: &'c Catalog, query: &str) -> Vec<&'c Product> {
        let mut scored: Vec<(f64, &Product)> = self
            .index
            .score(query)
            .into_iter()
            .filter_map(|(id, score)| catalog.get(&id).map(|p| (score, p)))
            .collect();
        scored.sort_by(|a, b| {
            b.0.partial_cmp(&a.0)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then_with(|| a.1.product_id.cmp(&b.1.product_id))
        });
        scored.into_iter().map(|(_, p)| p).collect()
    }
}

/// The scored field concatenation: title, attributes (name value pairs in
/// name order), then description.
pub fn scored_text(product: &Product) -> String {
    let attrs: Vec<String> = product
        .attributes
        .iter()
        .map(|(k, v)| format!("{k} {v}"))
        .collect();
    format!("{} {} {}", product.title, attrs.join(" "), product.description)
}
