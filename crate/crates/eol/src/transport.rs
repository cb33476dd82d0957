use crate::EolError;
use std::path::{Path, PathBuf};
use std::time::Duration;

/// Default public endpoint.
pub const DEFAULT_BASE_URL: &str = "https://eol.org";

/// One logical call against the service.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Request {
    Search { query: String },
    Traits { taxon_id: String },
}

impl Request {
    /// Relative fixture file for this request.
    pub fn fixture_path(&self) -> PathBuf {
        match self {
            Request::Search { query } => Path::new("search").join(format!("{}.json", slug(query))),
            Request::Traits { taxon_id } => Path::new("traits").join(format!("{}.json", slug(taxon_id))),
        }
    }
}

fn slug(text: &str) -> String {
    let lowered: String = text
        .trim()
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() {
                c.to_ascii_lowercase()
            } else {
                '-'
            }
        })
        .collect();
    lowered
        .split('-')
        .filter(|p| !p.is_empty())
        .collect::<Vec<_>>()
        .join("-")
}

/// Where response bodies come from.
pub trait Transport: Send + Sync {
    fn fetch(&self, request: &Request) -> Result<String, EolError>;
}

/// Live HTTPS access.
#[derive(Debug, Clone)]
pub struct HttpTransport {
    base_url: String,
    token: Option<String>,
    agent: ureq::Agent,
}

impl HttpTransport {
    pub fn new(base_url: impl Into<String>) -> Self {
        let agent = ureq::Agent::config_builder()
            .timeout_global(Some(Duration::from_secs(20)))
            .build()
            .new_agent();
        Self {
            base_url: base_url.into().trim_end_matches('/').to_string(),
            token: None,
            agent,
        }
    }

    /// Base URL and token from the environment, public endpoint otherwise.
    pub fn from_env() -> Self {
        let base = std::env::var(crate::BASE_URL_ENV)
            .ok()
            .filter(|b| !b.is_empty())
            .unwrap_or_else(|| DEFAULT_BASE_URL.to_string());
        let token = std::env::var(crate::TOKEN_ENV).ok().filter(|t| !t.is_empty());
        Self::new(base).with_token(token)
    }

    /// Bearer token sent with trait queries.
    pub fn with_token(mut self, token: Option<String>) -> Self {
        self.token = token;
        self
    }

    pub fn base_url(&self) -> &str {
        &self.base_url
    }
}

/// Page traits with their predicate, measurement, units and source.
fn trait_query(taxon_id: &str) -> String {
    format!(
        "MATCH (p:Page)-[:trait]->(t:Trait)-[:predicate]->(pred:Term) \
         WHERE p.page_id = {taxon_id} \
         OPTIONAL MATCH (t)-[:units_term]->(u:Term) \
         RETURN pred.name, t.measurement, u.name, t.source LIMIT 500"
    )
}

impl Transport for HttpTransport {
    fn fetch(&self, request: &Request) -> Result<String, EolError> {
        let call = match request {
            Request::Search { query } => self
                .agent
                .get(format!("{}/api/search/1.0.json", self.base_url))
                .query("q", query)
                .query("page", "1")
                .header("Accept", "application/json")
                .call(),
            Request::Traits { taxon_id } => {
                if !taxon_id.chars().all(|c| c.is_ascii_digit()) {
                    return Err(EolError::InvalidRequest(format!(
                        "taxon id `{taxon_id}` is not numeric"
                    )));
                }
                let mut builder = self
                    .agent
                    .get(format!("{}/service/cypher", self.base_url))
                    .query("query", trait_query(taxon_id))
                    .header("Accept", "application/json");
                if let Some(token) = &self.token {
                    builder = builder.header("Authorization", format!("JWT {token}"));
                }
                builder.call()
            }
        };
        match call {
            Ok(mut response) => response
                .body_mut()
                .read_to_string()
                .map_err(|e| EolError::Network(e.to_string())),
            Err(ureq::Error::StatusCode(404)) => Err(EolError::NotFound(format!("{request:?}"))),
            Err(ureq::Error::StatusCode(code)) => Err(EolError::Network(format!("HTTP status {code}"))),
            Err(e) => Err(EolError::Network(e.to_string())),
        }
    }
}

/// Replays recorded response bodies from a directory, byte for byte.
#[derive(Debug, Clone)]
pub struct FixtureTransport {
    dir: PathBuf,
}

impl FixtureTransport {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }
}

impl Transport for FixtureTransport {
    fn fetch(&self, request: &Request) -> Result<String, EolError> {
        let path = self.dir.join(request.fixture_path());
        std::fs::read_to_string(&path).map_err(|e| match e.kind() {
            std::io::ErrorKind::NotFound => EolError::NotFound(format!("no fixture at {}", path.display())),
            _ => EolError::Fixture(format!("{}: {e}", path.display())),
        })
    }
}

/// Passes requests through and saves each body where
/// [`FixtureTransport`] will look for it.
pub struct RecordingTransport<T> {
    inner: T,
    dir: PathBuf,
}

impl<T: Transport> RecordingTransport<T> {
    pub fn new(inner: T, dir: impl Into<PathBuf>) -> Self {
        Self { inner, dir: dir.into() }
    }
}

impl<T: Transport> Transport for RecordingTransport<T> {
    fn fetch(&self, request: &Request) -> Result<String, EolError> {
        let body = self.inner.fetch(request)?;
        let path = self.dir.join(request.fixture_path());
        let write = || -> std::io::Result<()> {
            if let Some(parent) = path.parent() {
                std::fs::create_dir_all(parent)?;
            }
            std::fs::write(&path, &body)
        };
        write().map_err(|e| EolError::Fixture(format!("{}: {e}", path.display())))?;
        Ok(body)
    }
}
