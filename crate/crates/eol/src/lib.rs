//! Species search and trait lookup against the Encyclopedia of Life,
//! with the retrieved traits turned into suggested biotic parameters.
//!
//! Live requests go through [`HttpTransport`]. Tests and offline use
//! replay recorded bodies through [`FixtureTransport`].
//!
//! ```
//! use ecoloom_eol::EolClient;
//!
//! let client = EolClient::with_fixtures(ecoloom_eol::bundled_fixtures());
//! let lookup = client.lookup("gray wolf").unwrap().unwrap();
//! assert_eq!(lookup.candidate.scientific_name, "Canis lupus");
//! assert_eq!(lookup.estimate.params.lifespan, Some(180));
//! ```

mod mapping;
mod transport;

pub use mapping::{traits_to_parameters, Estimate, MappingTable, ParameterEstimate, TraitMapping, UnitConversion};
pub use transport::{FixtureTransport, HttpTransport, RecordingTransport, Request, Transport, DEFAULT_BASE_URL};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::path::PathBuf;
use std::sync::Arc;

pub const BASE_URL_ENV: &str = "ECOLOOM_EOL_BASE_URL";
pub const FIXTURES_ENV: &str = "ECOLOOM_EOL_FIXTURES";
pub const TOKEN_ENV: &str = "ECOLOOM_EOL_TOKEN";

#[derive(Debug, thiserror::Error)]
pub enum EolError {
    #[error("network failure: {0}")]
    Network(String),
    #[error("malformed response: {0}")]
    Malformed(String),
    #[error("not found: {0}")]
    NotFound(String),
    #[error("fixture unreadable: {0}")]
    Fixture(String),
    #[error("invalid request: {0}")]
    InvalidRequest(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpeciesCandidate {
    pub taxon_id: String,
    pub scientific_name: String,
    pub common_name: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraitRecord {
    pub predicate: String,
    pub value: f64,
    /// As reported, never normalised.
    pub units: String,
    pub source: String,
}

/// The whole search, fetch and map sequence for one query.
#[derive(Debug, Clone, PartialEq)]
pub struct Lookup {
    pub candidate: SpeciesCandidate,
    pub traits: Vec<TraitRecord>,
    pub estimate: ParameterEstimate,
}

/// Fixtures shipped with this crate.
pub fn bundled_fixtures() -> PathBuf {
    PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures"))
}

#[derive(Clone)]
pub struct EolClient {
    transport: Arc<dyn Transport>,
}

impl std::fmt::Debug for EolClient {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("EolClient").finish_non_exhaustive()
    }
}

impl EolClient {
    pub fn new(transport: impl Transport + 'static) -> Self {
        Self {
            transport: Arc::new(transport),
        }
    }

    pub fn with_fixtures(dir: impl Into<PathBuf>) -> Self {
        Self::new(FixtureTransport::new(dir))
    }

    /// Fixture replay when the fixtures variable is set, live HTTP otherwise.
    pub fn from_env() -> Self {
        if let Some(dir) = std::env::var_os(FIXTURES_ENV).filter(|d| !d.is_empty()) {
            return Self::with_fixtures(dir);
        }
        Self::new(HttpTransport::from_env())
    }

    pub fn search_species(&self, query: &str) -> Result<Vec<SpeciesCandidate>, EolError> {
        let query = query.trim();
        if query.is_empty() {
            return Err(EolError::InvalidRequest("empty species query".into()));
        }
        let body = self.transport.fetch(&Request::Search { query: query.into() })?;
        parse_search(&body)
    }

    pub fn fetch_traits(&self, taxon_id: &str) -> Result<Vec<TraitRecord>, EolError> {
        let taxon_id = taxon_id.trim();
        if taxon_id.is_empty() {
            return Err(EolError::InvalidRequest("empty taxon id".into()));
        }
        let body = self.transport.fetch(&Request::Traits {
            taxon_id: taxon_id.into(),
        })?;
        parse_traits(&body)
    }

    /// Uses the first candidate. `Ok(None)` when nothing matches.
    pub fn lookup(&self, query: &str) -> Result<Option<Lookup>, EolError> {
        let Some(candidate) = self.search_species(query)?.into_iter().next() else {
            return Ok(None);
        };
        let traits = self.fetch_traits(&candidate.taxon_id)?;
        let estimate = traits_to_parameters(&traits);
        Ok(Some(Lookup {
            candidate,
            traits,
            estimate,
        }))
    }
}

fn malformed(what: impl Into<String>) -> EolError {
    EolError::Malformed(what.into())
}

fn text_of(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.clone()),
        Value::Number(n) => Some(n.to_string()),
        _ => None,
    }
}

/// Search API body: `results[]` with `id`, `title` and a `; `-separated
/// `content` list of names.
pub fn parse_search(body: &str) -> Result<Vec<SpeciesCandidate>, EolError> {
    let doc: Value = serde_json::from_str(body).map_err(|e| malformed(e.to_string()))?;
    let results = doc
        .get("results")
        .and_then(Value::as_array)
        .ok_or_else(|| malformed("search response has no `results` array"))?;
    results
        .iter()
        .map(|r| {
            let taxon_id = r
                .get("id")
                .and_then(text_of)
                .filter(|s| !s.is_empty())
                .ok_or_else(|| malformed("search result without an id"))?;
            let scientific_name = r
                .get("title")
                .and_then(Value::as_str)
                .ok_or_else(|| malformed(format!("search result {taxon_id} without a title")))?
                .trim()
                .to_string();
            let common_name = r.get("content").and_then(Value::as_str).and_then(|content| {
                content
                    .split(';')
                    .map(str::trim)
                    .find(|n| !n.is_empty() && !n.starts_with(scientific_name.as_str()))
                    .map(str::to_string)
            });
            Ok(SpeciesCandidate {
                taxon_id,
                scientific_name,
                common_name,
            })
        })
        .collect()
}

/// TraitBank query body: `columns` naming predicate, measurement, units
/// and source, and `data` rows in that order. Rows whose measurement is
/// not a finite number are dropped.
pub fn parse_traits(body: &str) -> Result<Vec<TraitRecord>, EolError> {
    let doc: Value = serde_json::from_str(body).map_err(|e| malformed(e.to_string()))?;
    let rows = doc
        .get("data")
        .and_then(Value::as_array)
        .ok_or_else(|| malformed("trait response has no `data` array"))?;
    let mut out = Vec::new();
    for row in rows {
        let cells = row.as_array().ok_or_else(|| malformed("trait row is not an array"))?;
        if cells.len() < 4 {
            return Err(malformed(format!("trait row has {} cells, expected 4", cells.len())));
        }
        let Some(predicate) = cells[0].as_str() else {
            return Err(malformed("trait row without a predicate"));
        };
        let value = match &cells[1] {
            Value::Number(n) => n.as_f64(),
            Value::String(s) => s.trim().parse::<f64>().ok(),
            _ => None,
        };
        let Some(value) = value.filter(|v| v.is_finite()) else {
            continue;
        };
        out.push(TraitRecord {
            predicate: predicate.to_string(),
            value,
            units: cells[2].as_str().unwrap_or("").to_string(),
            source: cells[3].as_str().unwrap_or("").to_string(),
        });
    }
    Ok(out)
}
