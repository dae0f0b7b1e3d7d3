//! The version-feature registry: which quality-of-life features each of the
//! 18 (site, version) pairs carries. The same matrix ships as a
//! machine-readable table under `assets/version_features.json`; a test keeps
//! the two in sync.

use serde::{Deserialize, Serialize};

use crate::types::{Site, Version};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchPlacement {
    Top,
    Bottom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HtmlFlavor {
    /// Table layouts, font tags, HTML 4.01 habits.
    Legacy,
    /// Div/class markup without semantic tags.
    Transitional,
    /// HTML5 semantic tags.
    Modern,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct VersionFeatures {
    pub version: Version,
    pub search_placement: SearchPlacement,
    pub has_dropdown_suggestions: bool,
    pub has_toc: bool,
    pub icon_gated_search: bool,
    pub popup_ads: bool,
    pub html_flavor: HtmlFlavor,
}

const fn row(
    version: Version,
    search_placement: SearchPlacement,
    has_dropdown_suggestions: bool,
    has_toc: bool,
    icon_gated_search: bool,
    popup_ads: bool,
    html_flavor: HtmlFlavor,
) -> VersionFeatures {
    VersionFeatures {
        version,
        search_placement,
        has_dropdown_suggestions,
        has_toc,
        icon_gated_search,
        popup_ads,
        html_flavor,
    }
}

use HtmlFlavor::{Legacy, Modern, Transitional};
use SearchPlacement::{Bottom, Top};
use Version::*;

static WIKI: [VersionFeatures; 6] = [
    row(V1, Bottom, false, false, false, false, Legacy),
    row(V2, Bottom, false, false, false, false, Legacy),
    row(V3, Top, false, true, false, false, Transitional),
    row(V4, Top, true, true, false, false, Transitional),
    row(V5, Top, true, true, false, false, Modern),
    row(V6, Top, true, true, false, false, Modern),
];

static NEWS: [VersionFeatures; 6] = [
    row(V1, Bottom, false, false, false, false, Legacy),
    row(V2, Top, false, false, false, false, Legacy),
    row(V3, Top, false, false, false, false, Transitional),
    row(V4, Top, false, false, false, false, Transitional),
    row(V5, Top, false, false, true, false, Modern),
    row(V6, Top, false, false, false, false, Modern),
];

static SHOP: [VersionFeatures; 6] = [
    row(V1, Top, false, false, false, false, Legacy),
    row(V2, Top, false, false, false, false, Legacy),
    row(V3, Top, false, false, false, false, Transitional),
    row(V4, Top, false, false, false, false, Transitional),
    row(V5, Top, false, false, false, true, Modern),
    row(V6, Top, false, false, false, false, Modern),
];

/// The fixed registry row for a (site, version) pair; total over all 18.
pub fn features(site: Site, version: Version) -> &'static VersionFeatures {
    let table = match site {
        Site::Wiki => &WIKI,
        Site::News => &NEWS,
        Site::Shop => &SHOP,
    };
    &table[(version.number() - 1) as usize]
}
