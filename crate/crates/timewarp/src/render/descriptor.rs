//! Per-version chrome descriptors: the text labels each era skin uses.
//! The canonical copies live under `assets/templates/<site>/<version>/` and
//! are embedded at compile time.

use serde::{Deserialize, Serialize};

use crate::types::{Site, Version};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChromeDescriptor {
    pub site_title: String,
    pub tagline: String,
    pub welcome: String,
    pub search_label: String,
    pub search_button: String,
    pub search_placeholder: String,
    pub featured_heading: String,
    pub footer: String,
}

macro_rules! embed {
    ($site:literal, $ver:literal) => {
        include_str!(concat!(
            "../../../../assets/templates/",
            $site,
            "/",
            $ver,
            "/template.json"
        ))
    };
}

static RAW: [[&str; 6]; 3] = [
    [
        embed!("wiki", "v1"),
        embed!("wiki", "v2"),
        embed!("wiki", "v3"),
        embed!("wiki", "v4"),
        embed!("wiki", "v5"),
        embed!("wiki", "v6"),
    ],
    [
        embed!("news", "v1"),
        embed!("news", "v2"),
        embed!("news", "v3"),
        embed!("news", "v4"),
        embed!("news", "v5"),
        embed!("news", "v6"),
    ],
    [
        embed!("shop", "v1"),
        embed!("shop", "v2"),
        embed!("shop", "v3"),
        embed!("shop", "v4"),
        embed!("shop", "v5"),
        embed!("shop", "v6"),
    ],
];

fn site_index(site: Site) -> usize {
    match site {
        Site::Wiki => 0,
        Site::News => 1,
        Site::Shop => 2,
    }
}

/// Parse the descriptor for a (site, version) pair.
pub fn chrome(site: Site, version: Version) -> ChromeDescriptor {
    let raw = RAW[site_index(site)][(version.number() - 1) as usize];
    serde_json::from_str(raw).expect("bundled chrome descriptor is valid JSON")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_descriptors_parse() {
        for site in Site::ALL {
            for version in Version::ALL {
                let c = chrome(site, version);
                assert!(!c.site_title.is_empty());
            }
        }
    }
}
