//! Internal URL model. The programmatic kernel speaks
//! `timewarp://{site}/{path}?{query}`; rendered pages carry version-prefixed
//! relative hrefs `/v{k}/{site}/...` which the HTTP server serves directly.
//! Both forms (plus absolute http URLs containing the version prefix) parse
//! to the same [`SiteUrl`]; anything else is a disallowed URL.

use std::collections::BTreeMap;
use std::fmt;

use crate::types::{Site, Version};
use crate::urlenc::{decode_component, decode_query, encode_component, encode_query};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SiteUrl {
    pub site: Site,
    /// Decoded path segments below the site root.
    pub segments: Vec<String>,
    /// Decoded query pairs in source order.
    pub query: Vec<(String, String)>,
}

impl SiteUrl {
    pub fn home(site: Site) -> SiteUrl {
        SiteUrl {
            site,
            segments: Vec::new(),
            query: Vec::new(),
        }
    }

    pub fn query_get(&self, key: &str) -> Option<&str> {
        self.query
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn query_map(&self) -> BTreeMap<String, String> {
        self.query.iter().cloned().collect()
    }

    /// Canonical kernel form, e.g. `timewarp://wiki/article/Biology?x=1`.
    pub fn kernel_string(&self) -> String {
        let mut out = format!("timewarp://{}/", self.site.name());
        out.push_str(
            &self
                .segments
                .iter()
                .map(|s| encode_component(s))
                .collect::<Vec<_>>()
                .join("/"),
        );
        if !self.query.is_empty() {
            out.push('?');
            out.push_str(&encode_query(self.query.iter().map(|(k, v)| (k.as_str(), v.as_str()))));
        }
        out
    }

    /// Server path form, e.g. `/v3/wiki/article/Biology?x=1`.
    pub fn http_path(&self, version: Version) -> String {
        let mut out = format!("/{}/{}/", version.name(), self.site.name());
        out.push_str(
            &self
                .segments
                .iter()
                .map(|s| encode_component(s))
                .collect::<Vec<_>>()
                .join("/"),
        );
        if !self.query.is_empty() {
            out.push('?');
            out.push_str(&encode_query(self.query.iter().map(|(k, v)| (k.as_str(), v.as_str()))));
        }
        out
    }
}

impl fmt::Display for SiteUrl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.kernel_string())
    }
}

/// Parse any accepted URL form. Returns the version when the URL carried a
/// `/v{k}/` prefix.
pub fn parse_url(raw: &str) -> Result<(SiteUrl, Option<Version>), String> {
    let raw = raw.trim();
    if let Some(rest) = raw.strip_prefix("timewarp://") {
        let (site_name, tail) = rest.split_once('/').unwrap_or((rest, ""));
        let site = Site::parse(site_name).map_err(|_| raw.to_string())?;
        return Ok((parse_tail(site, tail), None));
    }
    if let Some(path) = raw.strip_prefix('/') {
        return parse_prefixed(path).ok_or_else(|| raw.to_string());
    }
    if let Some(rest) = raw.strip_prefix("http://").or_else(|| raw.strip_prefix("https://")) {
        // absolute form: anything up to the first '/' is host:port
        if let Some((_, path)) = rest.split_once('/') {
            if let Some(parsed) = parse_prefixed(path) {
                return Ok(parsed);
            }
        }
        return Err(raw.to_string());
    }
    Err(raw.to_string())
}

/// Parse `v{k}/{site}/{tail}` (no leading slash).
fn parse_prefixed(path: &str) -> Option<(SiteUrl, Option<Version>)> {
    let (ver_name, rest) = path.split_once('/')?;
    let version = Version::parse(ver_name).ok()?;
    let (site_name, tail) = rest.split_once('/').unwrap_or((rest, ""));
    let site = Site::parse(site_name).ok()?;
    Some((parse_tail(site, tail), Some(version)))
}

fn parse_tail(site: Site, tail: &str) -> SiteUrl {
    let (path, query) = match tail.split_once('?') {
        Some((p, q)) => (p, q),
        None => (tail, ""),
    };
    let segments: Vec<String> = path
        .split('/')
        .filter(|s| !s.is_empty())
        .map(decode_component)
        .collect();
    SiteUrl {
        site,
        segments,
        query: decode_query(query),
    }
}
