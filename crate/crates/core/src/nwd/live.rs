//! Hit counts from a live search endpoint, cached on disk.
//!
//! The endpoint is described by a URL template containing `{query}` and a
//! dotted path into the JSON response locating the count, e.g.
//! `searchInformation.totalResults`. Numeric path segments index arrays.
//! Counts may be JSON numbers or digit strings (`"1,230"` is accepted).

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Duration;

use serde_json::Value;
use sha2::{Digest, Sha256};

use super::{FrequencyProvider, NwdError};

#[derive(Debug, Clone)]
pub struct LiveConfig {
    pub url_template: String,
    pub count_path: String,
    pub cache_dir: PathBuf,
    pub timeout: Duration,
    /// `N`; must exceed every count the endpoint reports.
    pub normalizer: f64,
}

pub struct LiveHitCounter {
    config: LiveConfig,
    agent: ureq::Agent,
    cache_lock: Mutex<()>,
    fetches: AtomicUsize,
}

fn quote(term: &str) -> String {
    let term = term.trim();
    if term.contains(char::is_whitespace) {
        format!("\"{term}\"")
    } else {
        term.to_owned()
    }
}

/// Query text for one term, or for two terms that must co-occur.
pub(crate) fn query_text(a: &str, b: Option<&str>) -> String {
    match b {
        Some(b) if b.trim() != a.trim() => format!("{} {}", quote(a), quote(b)),
        _ => quote(a),
    }
}

fn extract_count(body: &str, path: &str) -> Result<u64, String> {
    let root: Value = serde_json::from_str(body).map_err(|e| format!("response is not JSON: {e}"))?;
    let mut node = &root;
    for segment in path.split('.').filter(|s| !s.is_empty()) {
        let next = match node {
            Value::Array(items) => segment.parse::<usize>().ok().and_then(|i| items.get(i)),
            Value::Object(map) => map.get(segment),
            _ => None,
        };
        node = next.ok_or_else(|| format!("count path {path:?} not found at {segment:?}"))?;
    }
    match node {
        Value::Number(n) => n
            .as_u64()
            .or_else(|| n.as_f64().filter(|f| *f >= 0.0).map(|f| f.round() as u64))
            .ok_or_else(|| format!("count {n} is not a non-negative number")),
        Value::String(s) => {
            let digits: String = s.chars().filter(|c| *c != ',').collect();
            digits
                .trim()
                .parse::<u64>()
                .map_err(|_| format!("count {s:?} is not numeric"))
        }
        other => Err(format!("count value {other} is not a number")),
    }
}

impl LiveHitCounter {
    pub fn new(config: LiveConfig) -> Result<Self, NwdError> {
        if !config.url_template.contains("{query}") {
            return Err(NwdError::Transport {
                query: String::new(),
                detail: format!("URL template {:?} lacks a {{query}} placeholder", config.url_template),
            });
        }
        fs::create_dir_all(&config.cache_dir)?;
        let agent: ureq::Agent = ureq::Agent::config_builder()
            .timeout_global(Some(config.timeout))
            .build()
            .into();
        Ok(Self {
            config,
            agent,
            cache_lock: Mutex::new(()),
            fetches: AtomicUsize::new(0),
        })
    }

    /// Number of network requests issued so far.
    pub fn network_fetches(&self) -> usize {
        self.fetches.load(Ordering::Relaxed)
    }

    fn cache_path(&self, query: &str) -> PathBuf {
        let mut hasher = Sha256::new();
        hasher.update(self.config.url_template.as_bytes());
        hasher.update([0]);
        hasher.update(query.as_bytes());
        let digest = hasher.finalize();
        let name: String = digest.iter().map(|b| format!("{b:02x}")).collect();
        self.config.cache_dir.join(format!("{name}.count"))
    }

    fn read_cache(path: &Path) -> Option<u64> {
        fs::read_to_string(path).ok()?.trim().parse().ok()
    }

    fn write_cache(&self, path: &Path, count: u64) -> Result<(), NwdError> {
        let _guard = self.cache_lock.lock().unwrap_or_else(|e| e.into_inner());
        let mut tmp = tempfile::NamedTempFile::new_in(&self.config.cache_dir)?;
        writeln!(tmp, "{count}")?;
        tmp.persist(path).map_err(|e| e.error)?;
        Ok(())
    }

    fn fetch(&self, query: &str) -> Result<u64, NwdError> {
        let transport = |detail: String| NwdError::Transport {
            query: query.to_owned(),
            detail,
        };
        let encoded: String = url::form_urlencoded::byte_serialize(query.as_bytes()).collect();
        let url = self.config.url_template.replace("{query}", &encoded);
        self.fetches.fetch_add(1, Ordering::Relaxed);
        let mut response = self
            .agent
            .get(&url)
            .call()
            .map_err(|e| transport(e.to_string()))?;
        let body = response
            .body_mut()
            .read_to_string()
            .map_err(|e| transport(e.to_string()))?;
        extract_count(&body, &self.config.count_path).map_err(transport)
    }

    /// Count for `query`, from cache when present.
    pub fn hit_count(&self, query: &str) -> Result<u64, NwdError> {
        let path = self.cache_path(query);
        if let Some(count) = Self::read_cache(&path) {
            return Ok(count);
        }
        let count = self.fetch(query)?;
        self.write_cache(&path, count)?;
        Ok(count)
    }
}

impl FrequencyProvider for LiveHitCounter {
    fn frequency(&self, term: &str) -> Result<u64, NwdError> {
        self.hit_count(&query_text(term, None))
    }

    fn pair_frequency(&self, a: &str, b: &str) -> Result<u64, NwdError> {
        let (a, b) = if a.trim() <= b.trim() { (a, b) } else { (b, a) };
        self.hit_count(&query_text(a, Some(b)))
    }

    fn normalizer(&self) -> f64 {
        self.config.normalizer
    }
}
