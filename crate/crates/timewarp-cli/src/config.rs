//! TOML configuration with environment-variable overrides for secrets.

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Deserialize;
use timewarp::sites::Backends;

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(default)]
pub struct Config {
    pub corpora: CorporaConfig,
    pub server: ServerConfig,
    pub run: RunConfig,
    pub judge: JudgeConfig,
    pub agent: AgentConfig,
}

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(default)]
pub struct CorporaConfig {
    /// Paths to JSONL corpus files; the bundled miniatures when unset.
    pub wiki: Option<PathBuf>,
    pub news: Option<PathBuf>,
    pub catalog: Option<PathBuf>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default)]
pub struct ServerConfig {
    pub host: String,
    pub port: u16,
}

impl Default for ServerConfig {
    fn default() -> Self {
        ServerConfig { host: "127.0.0.1".into(), port: 8080 }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub max_steps: usize,
    pub parallelism: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig { max_steps: 30, parallelism: 4 }
    }
}

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(default)]
pub struct JudgeConfig {
    /// `rule` (default) or `llm`.
    pub backend: Option<String>,
    pub url: Option<String>,
    pub model: Option<String>,
}

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(default)]
pub struct AgentConfig {
    pub url: Option<String>,
    pub model: Option<String>,
}

impl Config {
    pub fn load(path: Option<&Path>) -> Result<Config> {
        match path {
            Some(path) => {
                let raw = std::fs::read_to_string(path)
                    .with_context(|| format!("reading config {}", path.display()))?;
                toml::from_str(&raw).with_context(|| format!("parsing config {}", path.display()))
            }
            None => Ok(Config::default()),
        }
    }

    /// Load corpora from configured paths, defaulting to the bundled set.
    pub fn backends(&self) -> Result<Backends> {
        use timewarp::sites::{Catalog, NewsCorpus, WikiCorpus};
        let c = &self.corpora;
        if c.wiki.is_none() && c.news.is_none() && c.catalog.is_none() {
            return Ok(timewarp::assets::bundled_backends());
        }
        let wiki = match &c.wiki {
            Some(p) => WikiCorpus::load(p).with_context(|| format!("loading {}", p.display()))?,
            None => WikiCorpus::from_jsonl(timewarp::assets::MINI_WIKI)?,
        };
        let news = match &c.news {
            Some(p) => NewsCorpus::load(p).with_context(|| format!("loading {}", p.display()))?,
            None => NewsCorpus::from_jsonl(timewarp::assets::MINI_NEWS)?,
        };
        let catalog = match &c.catalog {
            Some(p) => Catalog::load(p).with_context(|| format!("loading {}", p.display()))?,
            None => Catalog::from_jsonl(timewarp::assets::MINI_CATALOG)?,
        };
        Ok(Backends::new(wiki, news, catalog))
    }

    /// Judge backend: rule-based unless `llm` is configured (url from config
    /// or JUDGE_URL; the key comes from JUDGE_KEY only).
    pub fn judge_backend(&self, flag: Option<&str>) -> Result<timewarp::judge::JudgeBackend> {
        use timewarp::judge::{JudgeBackend, LlmJudge, LlmJudgeConfig};
        let choice = flag
            .map(|s| s.to_string())
            .or_else(|| self.judge.backend.clone())
            .unwrap_or_else(|| "rule".to_string());
        match choice.as_str() {
            "rule" => Ok(JudgeBackend::RuleBased),
            "llm" => {
                let url = self
                    .judge
                    .url
                    .clone()
                    .or_else(|| std::env::var("JUDGE_URL").ok())
                    .context("llm judge needs judge.url in config or JUDGE_URL")?;
                let model = self
                    .judge
                    .model
                    .clone()
                    .or_else(|| std::env::var("JUDGE_MODEL").ok())
                    .unwrap_or_else(|| "default".to_string());
                let config = LlmJudgeConfig {
                    base_url: url,
                    model,
                    api_key: std::env::var("JUDGE_KEY").ok(),
                    timeout: std::time::Duration::from_secs(60),
                    max_in_flight: self.run.parallelism,
                };
                Ok(JudgeBackend::Llm(LlmJudge::new(config)?))
            }
            other => anyhow::bail!("unknown judge backend: {other} (use rule or llm)"),
        }
    }
}
