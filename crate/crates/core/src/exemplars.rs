//! The four shipped starting-point models, each with the engine settings
//! under which its signature behavior shows.

use crate::engine::EngineConfig;
use crate::model::{parse_model, ConceptualModel, Format};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExemplarId {
    LogisticGrowth,
    ExponentialGrowth,
    PredatorPrey,
    CompetitiveExclusion,
}

impl ExemplarId {
    pub const ALL: [ExemplarId; 4] = [
        ExemplarId::LogisticGrowth,
        ExemplarId::ExponentialGrowth,
        ExemplarId::PredatorPrey,
        ExemplarId::CompetitiveExclusion,
    ];

    pub fn slug(self) -> &'static str {
        match self {
            ExemplarId::LogisticGrowth => "logistic_growth",
            ExemplarId::ExponentialGrowth => "exponential_growth",
            ExemplarId::PredatorPrey => "predator_prey",
            ExemplarId::CompetitiveExclusion => "competitive_exclusion",
        }
    }

    pub fn title(self) -> &'static str {
        match self {
            ExemplarId::LogisticGrowth => "Logistic growth",
            ExemplarId::ExponentialGrowth => "Exponential growth",
            ExemplarId::PredatorPrey => "Predator-prey",
            ExemplarId::CompetitiveExclusion => "Competitive exclusion",
        }
    }

    fn sources(self) -> (&'static str, &'static str) {
        match self {
            ExemplarId::LogisticGrowth => (
                include_str!("../data/exemplars/logistic_growth.json"),
                include_str!("../data/exemplars/logistic_growth.config.json"),
            ),
            ExemplarId::ExponentialGrowth => (
                include_str!("../data/exemplars/exponential_growth.json"),
                include_str!("../data/exemplars/exponential_growth.config.json"),
            ),
            ExemplarId::PredatorPrey => (
                include_str!("../data/exemplars/predator_prey.json"),
                include_str!("../data/exemplars/predator_prey.config.json"),
            ),
            ExemplarId::CompetitiveExclusion => (
                include_str!("../data/exemplars/competitive_exclusion.json"),
                include_str!("../data/exemplars/competitive_exclusion.config.json"),
            ),
        }
    }

    /// The shipped model document, verbatim.
    pub fn document(self) -> &'static str {
        self.sources().0
    }
}

impl fmt::Display for ExemplarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.slug())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownExemplar(pub String);

impl fmt::Display for UnknownExemplar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unknown exemplar `{}`", self.0)
    }
}

impl std::error::Error for UnknownExemplar {}

impl FromStr for ExemplarId {
    type Err = UnknownExemplar;

    /// Accepts the slug with `_` or `-` separators, case-insensitively.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let wanted = s.trim().to_ascii_lowercase().replace('-', "_");
        ExemplarId::ALL
            .into_iter()
            .find(|id| id.slug() == wanted)
            .ok_or_else(|| UnknownExemplar(s.to_string()))
    }
}

/// The exemplar model plus the engine settings it was tuned under.
pub fn load_exemplar(id: ExemplarId) -> (ConceptualModel, EngineConfig) {
    let (model, config) = id.sources();
    let model = parse_model(model, Format::Json).expect("shipped exemplar parses");
    let config = serde_json::from_str(config).expect("shipped exemplar config parses");
    (model, config)
}
