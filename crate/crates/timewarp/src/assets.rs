//! Bundled miniature corpora, the task set with its manifest, refined plans,
//! and the version-feature table. The canonical files live under `assets/`
//! at the repository root and are embedded at compile time so the library is
//! self-contained; loaders for external files live on the corpus and task
//! modules.

use std::collections::BTreeMap;

use crate::sites::{Backends, Catalog, NewsCorpus, WikiCorpus};
use crate::taskset::{load_tasks_str, TaskManifest, TaskSpec};

pub const MINI_WIKI: &str = include_str!("../../../assets/corpora/mini_wiki.jsonl");
pub const MINI_NEWS: &str = include_str!("../../../assets/corpora/mini_news.jsonl");
pub const MINI_CATALOG: &str = include_str!("../../../assets/corpora/mini_catalog.jsonl");
pub const MINI_TASKS: &str = include_str!("../../../assets/tasks/mini_tasks.jsonl");
pub const MINI_MANIFEST: &str = include_str!("../../../assets/tasks/mini_manifest.json");
pub const VERSION_FEATURES: &str = include_str!("../../../assets/version_features.json");

macro_rules! plan_entry {
    ($name:literal) => {
        ($name, include_str!(concat!("../../../assets/plans/", $name, ".plan")))
    };
}

/// Refined, version-independent plans for every bundled goal.
pub const PLANS: &[(&str, &str)] = &[
    plan_entry!("wiki-fact-everest"),
    plan_entry!("wiki-recursive-chain"),
    plan_entry!("wiki-needle-physics"),
    plan_entry!("wiki-multi-article-bio"),
    plan_entry!("wiki-nav-skill"),
    plan_entry!("wiki-fact-biology"),
    plan_entry!("wiki-related-biology"),
    plan_entry!("wiki-fact-everest-first"),
    plan_entry!("wiki-trap-atlantis"),
    plan_entry!("news-count-morocco"),
    plan_entry!("news-compare-football"),
    plan_entry!("news-trap-covid"),
    plan_entry!("news-fact-olympics"),
    plan_entry!("news-count-stallman"),
    plan_entry!("news-verify-cruise"),
    plan_entry!("news-count-football-2010"),
    plan_entry!("shop-count-soundbar"),
    plan_entry!("shop-order-vinyl"),
    plan_entry!("shop-verify-mic"),
    plan_entry!("shop-visual-tasyl"),
    plan_entry!("shop-count-toothpaste"),
    plan_entry!("shop-order-lamp"),
    plan_entry!("shop-verify-frenchpress"),
    plan_entry!("multi-select-nuts"),
    plan_entry!("multi-query-brazil"),
    plan_entry!("multi-count-vitamink"),
    plan_entry!("multi-chain-coffee"),
    plan_entry!("multi-order-radio"),
];

/// Backends over the bundled corpora.
pub fn bundled_backends() -> Backends {
    Backends::new(
        WikiCorpus::from_jsonl(MINI_WIKI).expect("bundled wiki corpus is valid"),
        NewsCorpus::from_jsonl(MINI_NEWS).expect("bundled news corpus is valid"),
        Catalog::from_jsonl(MINI_CATALOG).expect("bundled catalog is valid"),
    )
}

pub fn bundled_tasks() -> Vec<TaskSpec> {
    load_tasks_str(MINI_TASKS).expect("bundled task set is valid")
}

pub fn bundled_manifest() -> TaskManifest {
    serde_json::from_str(MINI_MANIFEST).expect("bundled manifest is valid")
}

pub fn bundled_plans() -> BTreeMap<String, String> {
    PLANS
        .iter()
        .map(|(goal, plan)| (goal.to_string(), plan.to_string()))
        .collect()
}

pub fn bundled_plan(goal_id: &str) -> Option<&'static str> {
    PLANS
        .iter()
        .find(|(goal, _)| *goal == goal_id)
        .map(|(_, plan)| *plan)
}
