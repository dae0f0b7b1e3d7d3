//! Site, version, and page-kind identifiers shared across the crate.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Site {
    Wiki,
    News,
    Shop,
}

impl Site {
    pub const ALL: [Site; 3] = [Site::Wiki, Site::News, Site::Shop];

    pub fn name(&self) -> &'static str {
        match self {
            Site::Wiki => "wiki",
            Site::News => "news",
            Site::Shop => "shop",
        }
    }

    pub fn parse(s: &str) -> Result<Site, UnknownName> {
        match s.to_ascii_lowercase().as_str() {
            "wiki" => Ok(Site::Wiki),
            "news" => Ok(Site::News),
            "shop" => Ok(Site::Shop),
            _ => Err(UnknownName::Site(s.to_string())),
        }
    }
}

impl fmt::Display for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One of the six era-specific frontend versions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Version {
    V1,
    V2,
    V3,
    V4,
    V5,
    V6,
}

impl Version {
    pub const ALL: [Version; 6] = [
        Version::V1,
        Version::V2,
        Version::V3,
        Version::V4,
        Version::V5,
        Version::V6,
    ];

    pub fn number(&self) -> u8 {
        match self {
            Version::V1 => 1,
            Version::V2 => 2,
            Version::V3 => 3,
            Version::V4 => 4,
            Version::V5 => 5,
            Version::V6 => 6,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Version::V1 => "v1",
            Version::V2 => "v2",
            Version::V3 => "v3",
            Version::V4 => "v4",
            Version::V5 => "v5",
            Version::V6 => "v6",
        }
    }

    pub fn parse(s: &str) -> Result<Version, UnknownName> {
        match s.to_ascii_lowercase().as_str() {
            "v1" | "1" => Ok(Version::V1),
            "v2" | "2" => Ok(Version::V2),
            "v3" | "3" => Ok(Version::V3),
            "v4" | "4" => Ok(Version::V4),
            "v5" | "5" => Ok(Version::V5),
            "v6" | "6" => Ok(Version::V6),
            _ => Err(UnknownName::Version(s.to_string())),
        }
    }

    /// Parse a version-set expression: `all`, `v6`, `v1:6`, `v2:4`, or a
    /// comma list `v1,v3,v5`. Ranges are inclusive.
    pub fn parse_set(s: &str) -> Result<Vec<Version>, UnknownName> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("all") {
            return Ok(Version::ALL.to_vec());
        }
        let mut out = Vec::new();
        for part in s.split(',') {
            let part = part.trim();
            if let Some((lo, hi)) = part.split_once(':').or_else(|| part.split_once("..")) {
                let lo = Version::parse(lo)?;
                let hi = Version::parse(hi)?;
                if lo.number() > hi.number() {
                    return Err(UnknownName::Version(part.to_string()));
                }
                for v in Version::ALL {
                    if v.number() >= lo.number() && v.number() <= hi.number() {
                        out.push(v);
                    }
                }
            } else {
                out.push(Version::parse(part)?);
            }
        }
        out.sort();
        out.dedup();
        if out.is_empty() {
            return Err(UnknownName::Version(s.to_string()));
        }
        Ok(out)
    }
}

impl fmt::Display for Version {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PageKind {
    Home,
    Article,
    SearchResults,
    Product,
    Cart,
    Confirmation,
    NotFound,
}

impl PageKind {
    pub fn name(&self) -> &'static str {
        match self {
            PageKind::Home => "home",
            PageKind::Article => "article",
            PageKind::SearchResults => "search_results",
            PageKind::Product => "product",
            PageKind::Cart => "cart",
            PageKind::Confirmation => "confirmation",
            PageKind::NotFound => "not_found",
        }
    }
}

impl fmt::Display for PageKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum UnknownName {
    #[error("unknown site: {0}")]
    Site(String),
    #[error("unknown version: {0}")]
    Version(String),
}
