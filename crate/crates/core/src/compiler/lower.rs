use super::ir::*;
use crate::model::{
    default_abiotic, default_biotic, validate_model, ComponentParams, ConceptualModel, Interaction, ValidationReport,
};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum CompileError {
    #[error("model has {n} validation violation(s):\n{report}", n = .0.violations.len(), report = .0)]
    Invalid(ValidationReport),
}

/// Lowercases and replaces every non-alphanumeric character with `-`.
pub fn procedure_slug(text: &str) -> String {
    text.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() {
                c.to_ascii_lowercase()
            } else {
                '-'
            }
        })
        .collect()
}

fn procedure_name(kind: MethodKind, parts: &[&str]) -> String {
    let mut name = kind.slug().to_string();
    for part in parts {
        name.push('-');
        name.push_str(&procedure_slug(part));
    }
    name
}

/// Lowers a valid model to a [`SimProgram`].
///
/// Component methods come first in declaration order, each component in the
/// fixed order lifespan, minimum population, biomass, reproduction,
/// movement; relationship methods follow in declaration order.
pub fn compile(model: &ConceptualModel) -> Result<SimProgram, CompileError> {
    let report = validate_model(model);
    if !report.is_empty() {
        return Err(CompileError::Invalid(report));
    }

    let mut breeds = Vec::new();
    let mut pools = Vec::new();
    let mut populations = Vec::new();
    for c in &model.components {
        let population = match &c.params {
            ComponentParams::Biotic(authored) => {
                let mut p = default_biotic();
                p.merge_from(authored);
                breeds.push(BreedDef {
                    component_id: c.id.clone(),
                    name: c.display_name.clone(),
                    basis: c.population_basis,
                    params: BreedParams {
                        carbon_biomass: p.carbon_biomass.unwrap_or_default(),
                        respiratory_rate: p.respiratory_rate.unwrap_or_default(),
                        photosynthesis_rate: p.photosynthesis_rate.unwrap_or_default(),
                        assimilation_efficiency: p.assimilation_efficiency.unwrap_or_default(),
                        move_direction: p.move_direction.unwrap_or_default(),
                        move_velocity: p.move_velocity.unwrap_or_default(),
                        lifespan: p.lifespan.unwrap_or_default(),
                        reproductive_maturity: p.reproductive_maturity.unwrap_or_default(),
                        reproductive_interval: p.reproductive_interval.unwrap_or_default(),
                        offspring_count: p.offspring_count.unwrap_or_default(),
                        starting_population: p.starting_population.unwrap_or_default(),
                        minimum_population: p.minimum_population.unwrap_or_default(),
                        body_mass: p.body_mass.unwrap_or_default(),
                    },
                });
                Population::Breed(breeds.len() - 1)
            }
            ComponentParams::Abiotic(authored) => {
                let mut p = default_abiotic();
                p.merge_from(authored);
                pools.push(PoolDef {
                    component_id: c.id.clone(),
                    name: c.display_name.clone(),
                    amount: p.amount.unwrap_or_default(),
                    minimum_amount: p.minimum_amount.unwrap_or_default(),
                    growth_rate: p.growth_rate.unwrap_or_default(),
                });
                Population::Pool(pools.len() - 1)
            }
        };
        populations.push(PopulationRef {
            component_id: c.id.clone(),
            name: c.display_name.clone(),
            population,
        });
    }

    let mut methods = Vec::new();
    let mut no_ops = Vec::new();
    for pop in &populations {
        let origin = Origin::Component(pop.component_id.clone());
        let mut emit = |op: Op| {
            methods.push(MethodDef {
                origin: origin.clone(),
                name: procedure_name(op.kind(), &[&pop.component_id]),
                op,
            })
        };
        let mut skip = |kind: MethodKind, reason: &'static str| {
            no_ops.push(NoOp {
                origin: origin.clone(),
                kind,
                reason,
            })
        };
        match pop.population {
            Population::Breed(breed) => {
                let p = &breeds[breed].params;
                if p.lifespan > 0 {
                    emit(Op::Lifespan {
                        breed,
                        limit: p.lifespan,
                    });
                } else {
                    skip(MethodKind::Lifespan, "lifespan 0 disables the age limit");
                }
                if p.minimum_population > 0 {
                    emit(Op::MinimumPopulation {
                        breed,
                        minimum: p.minimum_population,
                    });
                } else {
                    skip(MethodKind::MinimumPopulation, "minimum_population is 0");
                }
                if p.photosynthesis_rate != 0.0 || p.respiratory_rate != 0.0 {
                    emit(Op::Biomass {
                        breed,
                        photosynthesis_rate: p.photosynthesis_rate,
                        respiratory_rate: p.respiratory_rate,
                    });
                } else {
                    skip(MethodKind::Biomass, "photosynthesis and respiration rates are 0");
                }
                if p.offspring_count > 0 && p.reproductive_interval > 0 {
                    emit(Op::Reproduction {
                        breed,
                        maturity: p.reproductive_maturity,
                        interval: p.reproductive_interval,
                        offspring: p.offspring_count,
                    });
                } else {
                    skip(MethodKind::Reproduction, "offspring_count is 0");
                }
                if p.move_velocity > 0.0 {
                    emit(Op::Movement {
                        breed,
                        direction: p.move_direction,
                        velocity: p.move_velocity,
                    });
                } else {
                    skip(MethodKind::Movement, "move_velocity is 0");
                }
            }
            Population::Pool(pool) => {
                let p = &pools[pool];
                if p.minimum_amount > 0.0 {
                    emit(Op::AbioticReplenish {
                        pool,
                        minimum: p.minimum_amount,
                    });
                } else {
                    skip(MethodKind::AbioticReplenish, "minimum_amount is 0");
                }
            }
        }
    }

    let lookup = |id: &str| {
        populations
            .iter()
            .find(|p| p.component_id == id)
            .map(|p| p.population)
            .expect("validated model has no dangling references")
    };
    let breed_of = |id: &str| match lookup(id) {
        Population::Breed(b) => b,
        Population::Pool(_) => unreachable!("validated model: `{id}` must be biotic"),
    };
    for r in &model.relationships {
        let resolved = r.interaction.with_defaults();
        let op = match resolved {
            Interaction::Consumes {
                interaction_probability,
                consumption_rate,
            } => Op::Consume {
                source: breed_of(&r.source),
                target: breed_of(&r.target),
                probability: interaction_probability.unwrap_or_default(),
                rate: consumption_rate.unwrap_or_default(),
            },
            Interaction::Destroys {
                interaction_probability,
                destruction_rate,
            } => Op::Destroy {
                source: breed_of(&r.source),
                target: lookup(&r.target),
                probability: interaction_probability.unwrap_or_default(),
                rate: destruction_rate.unwrap_or_default(),
            },
            Interaction::Affects {
                interaction_probability,
                growth_rate,
            } => Op::Affect {
                source: lookup(&r.source),
                target: lookup(&r.target),
                probability: interaction_probability.unwrap_or_default(),
                growth_rate: growth_rate.unwrap_or_default(),
            },
            Interaction::Produces { production_rate } => Op::Produce {
                source: breed_of(&r.source),
                target: lookup(&r.target),
                rate: production_rate.unwrap_or_default(),
            },
        };
        methods.push(MethodDef {
            origin: Origin::Relationship(r.id.clone()),
            name: procedure_name(op.kind(), &[&r.source, &r.target]),
            op,
        });
    }

    Ok(SimProgram {
        model_id: model.id.clone(),
        model_name: model.name.clone(),
        populations,
        breeds,
        pools,
        methods,
        no_ops,
    })
}
