//! The conceptual modeling language: Components, Relationships and their
//! parameters, as authored by a user.
//!
//! Parameters are stored as `Option`s so that authored values can be told
//! apart from values filled in by [`apply_defaults`]. The compiler resolves
//! every parameter to a concrete number before the engine sees it.

mod defaults;
mod document;
mod validate;

pub use defaults::{apply_defaults, default_abiotic, default_biotic, default_interaction};
pub use document::{parse_model, serialize_model, Format, ParseError};
pub use validate::{validate_model, Rule, ValidationReport, Violation};

use serde::{Deserialize, Serialize};
use std::fmt;

/// A user-authored ecology model.
#[derive(Debug, Clone, PartialEq)]
pub struct ConceptualModel {
    pub id: String,
    pub name: String,
    pub project_id: String,
    pub components: Vec<Component>,
    pub relationships: Vec<Relationship>,
    pub notes: Option<String>,
}

impl ConceptualModel {
    /// Empty model with a freshly generated id.
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            id: generate_id(),
            name: name.into(),
            project_id: String::new(),
            components: Vec::new(),
            relationships: Vec::new(),
            notes: None,
        }
    }

    pub fn component(&self, id: &str) -> Option<&Component> {
        self.components.iter().find(|c| c.id == id)
    }

    pub fn component_mut(&mut self, id: &str) -> Option<&mut Component> {
        self.components.iter_mut().find(|c| c.id == id)
    }

    pub fn relationship(&self, id: &str) -> Option<&Relationship> {
        self.relationships.iter().find(|r| r.id == id)
    }

    pub fn with_component(mut self, component: Component) -> Self {
        self.components.push(component);
        self
    }

    pub fn with_relationship(mut self, relationship: Relationship) -> Self {
        self.relationships.push(relationship);
        self
    }
}

/// UUID-style identifier used when the caller does not supply one.
pub fn generate_id() -> String {
    uuid::Uuid::new_v4().to_string()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComponentKind {
    Biotic,
    Abiotic,
}

impl ComponentKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ComponentKind::Biotic => "biotic",
            ComponentKind::Abiotic => "abiotic",
        }
    }
}

impl fmt::Display for ComponentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// How a biotic population is counted: whole organisms, or square metres of
/// coverage (grass, moss, coral).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PopulationBasis {
    #[default]
    Individuals,
    AreaDensity,
}

impl PopulationBasis {
    pub fn as_str(self) -> &'static str {
        match self {
            PopulationBasis::Individuals => "individuals",
            PopulationBasis::AreaDensity => "area_density",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Component {
    pub id: String,
    pub display_name: String,
    pub population_basis: PopulationBasis,
    pub params: ComponentParams,
}

impl Component {
    pub fn biotic(id: impl Into<String>, display_name: impl Into<String>, params: BioticParams) -> Self {
        Self {
            id: id.into(),
            display_name: display_name.into(),
            population_basis: PopulationBasis::Individuals,
            params: ComponentParams::Biotic(params),
        }
    }

    pub fn abiotic(id: impl Into<String>, display_name: impl Into<String>, params: AbioticParams) -> Self {
        Self {
            id: id.into(),
            display_name: display_name.into(),
            population_basis: PopulationBasis::Individuals,
            params: ComponentParams::Abiotic(params),
        }
    }

    pub fn kind(&self) -> ComponentKind {
        match self.params {
            ComponentParams::Biotic(_) => ComponentKind::Biotic,
            ComponentParams::Abiotic(_) => ComponentKind::Abiotic,
        }
    }

    pub fn biotic_params(&self) -> Option<&BioticParams> {
        match &self.params {
            ComponentParams::Biotic(p) => Some(p),
            ComponentParams::Abiotic(_) => None,
        }
    }

    pub fn abiotic_params(&self) -> Option<&AbioticParams> {
        match &self.params {
            ComponentParams::Abiotic(p) => Some(p),
            ComponentParams::Biotic(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ComponentParams {
    Biotic(BioticParams),
    Abiotic(AbioticParams),
}

/// A single parameter value. Counts and month durations are whole numbers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ParamValue {
    Real(f64),
    Count(u32),
}

impl ParamValue {
    pub fn as_f64(self) -> f64 {
        match self {
            ParamValue::Real(v) => v,
            ParamValue::Count(v) => f64::from(v),
        }
    }
}

/// Mutable view of one parameter slot, used by the document layer and by
/// defaulting so that both walk the same key table.
pub enum Slot<'a> {
    Real(&'a mut Option<f64>),
    Count(&'a mut Option<u32>),
}

impl Slot<'_> {
    pub(crate) fn get(&self) -> Option<ParamValue> {
        match self {
            Slot::Real(v) => v.map(ParamValue::Real),
            Slot::Count(v) => v.map(ParamValue::Count),
        }
    }

    pub(crate) fn is_set(&self) -> bool {
        self.get().is_some()
    }

    pub(crate) fn fill(&mut self, value: Option<ParamValue>) {
        match (self, value) {
            (Slot::Real(slot), Some(ParamValue::Real(v))) => **slot = Some(v),
            (Slot::Count(slot), Some(ParamValue::Count(v))) => **slot = Some(v),
            _ => {}
        }
    }
}

/// The thirteen biotic parameters.
///
/// Durations (`lifespan`, `reproductive_*`) are in months, i.e. ticks.
/// Rates are per second and scaled to a tick by the engine.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct BioticParams {
    pub carbon_biomass: Option<f64>,
    pub respiratory_rate: Option<f64>,
    pub photosynthesis_rate: Option<f64>,
    pub assimilation_efficiency: Option<f64>,
    pub move_direction: Option<f64>,
    pub move_velocity: Option<f64>,
    pub lifespan: Option<u32>,
    pub reproductive_maturity: Option<u32>,
    pub reproductive_interval: Option<u32>,
    pub offspring_count: Option<u32>,
    pub starting_population: Option<u32>,
    pub minimum_population: Option<u32>,
    pub body_mass: Option<f64>,
}

impl BioticParams {
    pub const KEYS: [&'static str; 13] = [
        "carbon_biomass",
        "respiratory_rate",
        "photosynthesis_rate",
        "assimilation_efficiency",
        "move_direction",
        "move_velocity",
        "lifespan",
        "reproductive_maturity",
        "reproductive_interval",
        "offspring_count",
        "starting_population",
        "minimum_population",
        "body_mass",
    ];

    pub fn slots(&mut self) -> [(&'static str, Slot<'_>); 13] {
        [
            ("carbon_biomass", Slot::Real(&mut self.carbon_biomass)),
            ("respiratory_rate", Slot::Real(&mut self.respiratory_rate)),
            ("photosynthesis_rate", Slot::Real(&mut self.photosynthesis_rate)),
            ("assimilation_efficiency", Slot::Real(&mut self.assimilation_efficiency)),
            ("move_direction", Slot::Real(&mut self.move_direction)),
            ("move_velocity", Slot::Real(&mut self.move_velocity)),
            ("lifespan", Slot::Count(&mut self.lifespan)),
            ("reproductive_maturity", Slot::Count(&mut self.reproductive_maturity)),
            ("reproductive_interval", Slot::Count(&mut self.reproductive_interval)),
            ("offspring_count", Slot::Count(&mut self.offspring_count)),
            ("starting_population", Slot::Count(&mut self.starting_population)),
            ("minimum_population", Slot::Count(&mut self.minimum_population)),
            ("body_mass", Slot::Real(&mut self.body_mass)),
        ]
    }

    /// Authored values in key order; unset parameters are skipped.
    pub fn entries(&self) -> Vec<(&'static str, ParamValue)> {
        let mut copy = self.clone();
        copy.slots()
            .into_iter()
            .filter_map(|(k, s)| s.get().map(|v| (k, v)))
            .collect()
    }

    /// Overlay `other`'s set parameters onto `self`.
    pub fn merge_from(&mut self, other: &BioticParams) {
        let mut other = other.clone();
        for ((_, mut mine), (_, theirs)) in self.slots().into_iter().zip(other.slots()) {
            if theirs.is_set() {
                mine.fill(theirs.get());
            }
        }
    }

    pub fn is_empty(&self) -> bool {
        self.entries().is_empty()
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct AbioticParams {
    pub amount: Option<f64>,
    pub minimum_amount: Option<f64>,
    pub growth_rate: Option<f64>,
}

impl AbioticParams {
    pub const KEYS: [&'static str; 3] = ["amount", "minimum_amount", "growth_rate"];

    pub fn slots(&mut self) -> [(&'static str, Slot<'_>); 3] {
        [
            ("amount", Slot::Real(&mut self.amount)),
            ("minimum_amount", Slot::Real(&mut self.minimum_amount)),
            ("growth_rate", Slot::Real(&mut self.growth_rate)),
        ]
    }

    pub fn entries(&self) -> Vec<(&'static str, ParamValue)> {
        let mut copy = self.clone();
        copy.slots()
            .into_iter()
            .filter_map(|(k, s)| s.get().map(|v| (k, v)))
            .collect()
    }

    pub fn merge_from(&mut self, other: &AbioticParams) {
        let mut other = other.clone();
        for ((_, mut mine), (_, theirs)) in self.slots().into_iter().zip(other.slots()) {
            if theirs.is_set() {
                mine.fill(theirs.get());
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RelationshipKind {
    Consumes,
    Destroys,
    Produces,
    Affects,
}

impl RelationshipKind {
    pub const ALL: [RelationshipKind; 4] = [
        RelationshipKind::Consumes,
        RelationshipKind::Destroys,
        RelationshipKind::Produces,
        RelationshipKind::Affects,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RelationshipKind::Consumes => "consumes",
            RelationshipKind::Destroys => "destroys",
            RelationshipKind::Produces => "produces",
            RelationshipKind::Affects => "affects",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.as_str().eq_ignore_ascii_case(s))
    }

    /// Parameter keys a relationship of this kind may carry.
    pub fn keys(self) -> &'static [&'static str] {
        match self {
            RelationshipKind::Consumes => &["interaction_probability", "consumption_rate"],
            RelationshipKind::Destroys => &["interaction_probability", "destruction_rate"],
            RelationshipKind::Affects => &["interaction_probability", "growth_rate"],
            RelationshipKind::Produces => &["production_rate"],
        }
    }
}

impl fmt::Display for RelationshipKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Kind-specific relationship parameters. Fractions are stored in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub enum Interaction {
    Consumes {
        interaction_probability: Option<f64>,
        consumption_rate: Option<f64>,
    },
    Destroys {
        interaction_probability: Option<f64>,
        destruction_rate: Option<f64>,
    },
    Affects {
        interaction_probability: Option<f64>,
        growth_rate: Option<f64>,
    },
    Produces {
        /// kg per second.
        production_rate: Option<f64>,
    },
}

impl Interaction {
    /// Interaction of `kind` with every parameter unset.
    pub fn empty(kind: RelationshipKind) -> Self {
        match kind {
            RelationshipKind::Consumes => Interaction::Consumes {
                interaction_probability: None,
                consumption_rate: None,
            },
            RelationshipKind::Destroys => Interaction::Destroys {
                interaction_probability: None,
                destruction_rate: None,
            },
            RelationshipKind::Affects => Interaction::Affects {
                interaction_probability: None,
                growth_rate: None,
            },
            RelationshipKind::Produces => Interaction::Produces { production_rate: None },
        }
    }

    pub fn consumes(probability: f64, rate: f64) -> Self {
        Interaction::Consumes {
            interaction_probability: Some(probability),
            consumption_rate: Some(rate),
        }
    }

    pub fn destroys(probability: f64, rate: f64) -> Self {
        Interaction::Destroys {
            interaction_probability: Some(probability),
            destruction_rate: Some(rate),
        }
    }

    pub fn affects(probability: f64, growth_rate: f64) -> Self {
        Interaction::Affects {
            interaction_probability: Some(probability),
            growth_rate: Some(growth_rate),
        }
    }

    pub fn produces(rate: f64) -> Self {
        Interaction::Produces {
            production_rate: Some(rate),
        }
    }

    pub fn kind(&self) -> RelationshipKind {
        match self {
            Interaction::Consumes { .. } => RelationshipKind::Consumes,
            Interaction::Destroys { .. } => RelationshipKind::Destroys,
            Interaction::Affects { .. } => RelationshipKind::Affects,
            Interaction::Produces { .. } => RelationshipKind::Produces,
        }
    }

    /// Slots in the same order as [`RelationshipKind::keys`].
    pub fn slots(&mut self) -> Vec<(&'static str, Slot<'_>)> {
        match self {
            Interaction::Consumes {
                interaction_probability,
                consumption_rate,
            } => vec![
                ("interaction_probability", Slot::Real(interaction_probability)),
                ("consumption_rate", Slot::Real(consumption_rate)),
            ],
            Interaction::Destroys {
                interaction_probability,
                destruction_rate,
            } => vec![
                ("interaction_probability", Slot::Real(interaction_probability)),
                ("destruction_rate", Slot::Real(destruction_rate)),
            ],
            Interaction::Affects {
                interaction_probability,
                growth_rate,
            } => vec![
                ("interaction_probability", Slot::Real(interaction_probability)),
                ("growth_rate", Slot::Real(growth_rate)),
            ],
            Interaction::Produces { production_rate } => {
                vec![("production_rate", Slot::Real(production_rate))]
            }
        }
    }

    pub fn entries(&self) -> Vec<(&'static str, ParamValue)> {
        let mut copy = self.clone();
        copy.slots()
            .into_iter()
            .filter_map(|(k, s)| s.get().map(|v| (k, v)))
            .collect()
    }
}

/// A directed interaction from `source` to `target`.
#[derive(Debug, Clone, PartialEq)]
pub struct Relationship {
    pub id: String,
    pub source: String,
    pub target: String,
    pub interaction: Interaction,
}

impl Relationship {
    pub fn new(
        id: impl Into<String>,
        source: impl Into<String>,
        target: impl Into<String>,
        interaction: Interaction,
    ) -> Self {
        Self {
            id: id.into(),
            source: source.into(),
            target: target.into(),
            interaction,
        }
    }

    pub fn kind(&self) -> RelationshipKind {
        self.interaction.kind()
    }
}
