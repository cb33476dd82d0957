use crate::model::{PopulationBasis, RelationshipKind};
use serde::Serialize;
use std::fmt;

/// Compiled form of a conceptual model: breed and pool tables plus the
/// ordered method schedule the engine runs once per tick.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimProgram {
    pub model_id: String,
    pub model_name: String,
    /// Every component in declaration order; fixes the report column order.
    pub populations: Vec<PopulationRef>,
    pub breeds: Vec<BreedDef>,
    pub pools: Vec<PoolDef>,
    pub methods: Vec<MethodDef>,
    /// Methods the model implies but that would do nothing.
    pub no_ops: Vec<NoOp>,
}

impl SimProgram {
    pub fn breed_index(&self, component_id: &str) -> Option<usize> {
        self.breeds.iter().position(|b| b.component_id == component_id)
    }

    pub fn pool_index(&self, component_id: &str) -> Option<usize> {
        self.pools.iter().position(|p| p.component_id == component_id)
    }

    pub fn methods_from<'a>(&'a self, origin_id: &'a str) -> impl Iterator<Item = &'a MethodDef> + 'a {
        self.methods.iter().filter(move |m| m.origin.id() == origin_id)
    }

    pub fn population_names(&self) -> Vec<&str> {
        self.populations.iter().map(|p| p.name.as_str()).collect()
    }
}

/// A biotic component or abiotic pool, by index into the program's tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Population {
    Breed(usize),
    Pool(usize),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PopulationRef {
    pub component_id: String,
    pub name: String,
    pub population: Population,
}

/// Fully resolved biotic parameters.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BreedParams {
    pub carbon_biomass: f64,
    pub respiratory_rate: f64,
    pub photosynthesis_rate: f64,
    pub assimilation_efficiency: f64,
    pub move_direction: f64,
    pub move_velocity: f64,
    pub lifespan: u32,
    pub reproductive_maturity: u32,
    pub reproductive_interval: u32,
    pub offspring_count: u32,
    pub starting_population: u32,
    pub minimum_population: u32,
    pub body_mass: f64,
}

impl BreedParams {
    /// Biomass a newly created agent starts with.
    pub fn initial_biomass(&self) -> f64 {
        if self.carbon_biomass > 0.0 {
            self.carbon_biomass
        } else {
            self.body_mass
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BreedDef {
    pub component_id: String,
    pub name: String,
    pub basis: PopulationBasis,
    pub params: BreedParams,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PoolDef {
    pub component_id: String,
    pub name: String,
    pub amount: f64,
    pub minimum_amount: f64,
    pub growth_rate: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "type", content = "id", rename_all = "snake_case")]
pub enum Origin {
    Component(String),
    Relationship(String),
}

impl Origin {
    pub fn id(&self) -> &str {
        match self {
            Origin::Component(id) | Origin::Relationship(id) => id,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum MethodKind {
    Lifespan,
    MinimumPopulation,
    Biomass,
    Reproduction,
    Movement,
    Consume,
    Destroy,
    Affect,
    Produce,
    AbioticReplenish,
}

impl MethodKind {
    pub fn slug(self) -> &'static str {
        match self {
            MethodKind::Lifespan => "lifespan",
            MethodKind::MinimumPopulation => "minimum-population",
            MethodKind::Biomass => "biomass",
            MethodKind::Reproduction => "reproduction",
            MethodKind::Movement => "movement",
            MethodKind::Consume => "consumes",
            MethodKind::Destroy => "destroys",
            MethodKind::Affect => "affects",
            MethodKind::Produce => "produces",
            MethodKind::AbioticReplenish => "replenish",
        }
    }

    pub fn for_relationship(kind: RelationshipKind) -> Self {
        match kind {
            RelationshipKind::Consumes => MethodKind::Consume,
            RelationshipKind::Destroys => MethodKind::Destroy,
            RelationshipKind::Affects => MethodKind::Affect,
            RelationshipKind::Produces => MethodKind::Produce,
        }
    }
}

impl fmt::Display for MethodKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.slug())
    }
}

/// One scheduled method with the parameters it needs copied in.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Op {
    Lifespan {
        breed: usize,
        limit: u32,
    },
    MinimumPopulation {
        breed: usize,
        minimum: u32,
    },
    Biomass {
        breed: usize,
        photosynthesis_rate: f64,
        respiratory_rate: f64,
    },
    Reproduction {
        breed: usize,
        maturity: u32,
        interval: u32,
        offspring: u32,
    },
    Movement {
        breed: usize,
        direction: f64,
        velocity: f64,
    },
    Consume {
        source: usize,
        target: usize,
        probability: f64,
        rate: f64,
    },
    Destroy {
        source: usize,
        target: Population,
        probability: f64,
        rate: f64,
    },
    Affect {
        source: Population,
        target: Population,
        probability: f64,
        growth_rate: f64,
    },
    Produce {
        source: usize,
        target: Population,
        rate: f64,
    },
    AbioticReplenish {
        pool: usize,
        minimum: f64,
    },
}

impl Op {
    pub fn kind(&self) -> MethodKind {
        match self {
            Op::Lifespan { .. } => MethodKind::Lifespan,
            Op::MinimumPopulation { .. } => MethodKind::MinimumPopulation,
            Op::Biomass { .. } => MethodKind::Biomass,
            Op::Reproduction { .. } => MethodKind::Reproduction,
            Op::Movement { .. } => MethodKind::Movement,
            Op::Consume { .. } => MethodKind::Consume,
            Op::Destroy { .. } => MethodKind::Destroy,
            Op::Affect { .. } => MethodKind::Affect,
            Op::Produce { .. } => MethodKind::Produce,
            Op::AbioticReplenish { .. } => MethodKind::AbioticReplenish,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MethodDef {
    pub origin: Origin,
    /// Stable procedure name, e.g. `consumes-wolf-sheep`.
    pub name: String,
    pub op: Op,
}

impl MethodDef {
    pub fn kind(&self) -> MethodKind {
        self.op.kind()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NoOp {
    pub origin: Origin,
    pub kind: MethodKind,
    pub reason: &'static str,
}
