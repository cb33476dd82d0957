//! Default parameter values.
//!
//! | parameter                | default | note                              |
//! |--------------------------|---------|-----------------------------------|
//! | carbon_biomass           | 0       | body_mass is used when 0          |
//! | respiratory_rate         | 0       |                                   |
//! | photosynthesis_rate      | 0       |                                   |
//! | assimilation_efficiency  | 1.0     |                                   |
//! | move_direction           | 0       | compass degrees, 0 = north        |
//! | move_velocity            | 0       | stationary                        |
//! | lifespan                 | 0       | 0 disables the age limit          |
//! | reproductive_maturity    | 0       |                                   |
//! | reproductive_interval    | 0       | 0 disables reproduction           |
//! | offspring_count          | 0       |                                   |
//! | starting_population      | 0       |                                   |
//! | minimum_population       | 0       | 0 disables the floor              |
//! | body_mass                | 1.0     | kg                                |
//! | amount / minimum_amount  | 0       | kg                                |
//! | growth_rate (abiotic)    | 0       |                                   |
//! | interaction_probability  | 0.10    |                                   |
//! | consumption_rate         | 0.20    |                                   |
//! | destruction_rate         | 0.10    |                                   |
//! | growth_rate (affects)    | 0.10    |                                   |
//! | production_rate          | 0       | kg/s                              |

use super::{AbioticParams, BioticParams, ComponentParams, ConceptualModel, Interaction, RelationshipKind};

pub fn default_biotic() -> BioticParams {
    BioticParams {
        carbon_biomass: Some(0.0),
        respiratory_rate: Some(0.0),
        photosynthesis_rate: Some(0.0),
        assimilation_efficiency: Some(1.0),
        move_direction: Some(0.0),
        move_velocity: Some(0.0),
        lifespan: Some(0),
        reproductive_maturity: Some(0),
        reproductive_interval: Some(0),
        offspring_count: Some(0),
        starting_population: Some(0),
        minimum_population: Some(0),
        body_mass: Some(1.0),
    }
}

pub fn default_abiotic() -> AbioticParams {
    AbioticParams {
        amount: Some(0.0),
        minimum_amount: Some(0.0),
        growth_rate: Some(0.0),
    }
}

pub fn default_interaction(kind: RelationshipKind) -> Interaction {
    match kind {
        RelationshipKind::Consumes => Interaction::Consumes {
            interaction_probability: Some(0.10),
            consumption_rate: Some(0.20),
        },
        RelationshipKind::Destroys => Interaction::Destroys {
            interaction_probability: Some(0.10),
            destruction_rate: Some(0.10),
        },
        RelationshipKind::Affects => Interaction::Affects {
            interaction_probability: Some(0.10),
            growth_rate: Some(0.10),
        },
        RelationshipKind::Produces => Interaction::Produces {
            production_rate: Some(0.0),
        },
    }
}

impl Interaction {
    /// Copy with unset parameters replaced by their defaults.
    pub fn with_defaults(&self) -> Interaction {
        let mut resolved = default_interaction(self.kind());
        let mut authored = self.clone();
        for ((_, mut slot), (_, value)) in resolved.slots().into_iter().zip(authored.slots()) {
            if value.is_set() {
                slot.fill(value.get());
            }
        }
        resolved
    }
}

/// Fills every unset parameter with its default. Authored values are never
/// touched, so applying twice is the same as applying once.
pub fn apply_defaults(mut model: ConceptualModel) -> ConceptualModel {
    for component in &mut model.components {
        match &mut component.params {
            ComponentParams::Biotic(p) => {
                let mut d = default_biotic();
                for ((_, mut slot), (_, def)) in p.slots().into_iter().zip(d.slots()) {
                    if !slot.is_set() {
                        slot.fill(def.get());
                    }
                }
            }
            ComponentParams::Abiotic(p) => {
                let mut d = default_abiotic();
                for ((_, mut slot), (_, def)) in p.slots().into_iter().zip(d.slots()) {
                    if !slot.is_set() {
                        slot.fill(def.get());
                    }
                }
            }
        }
    }
    for rel in &mut model.relationships {
        let mut d = default_interaction(rel.kind());
        for ((_, mut slot), (_, def)) in rel.interaction.slots().into_iter().zip(d.slots()) {
            if !slot.is_set() {
                slot.fill(def.get());
            }
        }
    }
    model
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Component, Relationship};

    #[test]
    fn grass_with_only_starting_population() {
        let grass = BioticParams {
            starting_population: Some(1000),
            ..Default::default()
        };
        let m = ConceptualModel::new("g").with_component(Component::biotic("grass", "Grass", grass));
        let m = apply_defaults(m);
        let p = m.components[0].biotic_params().unwrap();
        assert_eq!(p.starting_population, Some(1000));
        assert_eq!(p.offspring_count, Some(0));
        assert_eq!(p.reproductive_maturity, Some(0));
        assert_eq!(p.reproductive_interval, Some(0));
        assert!(p.entries().len() == 13);
    }

    #[test]
    fn abiotic_growth_rate_defaults_to_zero() {
        let water = AbioticParams {
            amount: Some(100.0),
            ..Default::default()
        };
        let m = ConceptualModel::new("w").with_component(Component::abiotic("water", "Water", water));
        let m = apply_defaults(m);
        let p = m.components[0].abiotic_params().unwrap();
        assert_eq!(p.growth_rate, Some(0.0));
        assert_eq!(p.amount, Some(100.0));
    }

    #[test]
    fn idempotent_and_preserves_authored_values() {
        let wolf = BioticParams {
            lifespan: Some(180),
            assimilation_efficiency: Some(0.4),
            ..Default::default()
        };
        let m = ConceptualModel::new("w")
            .with_component(Component::biotic("wolf", "Wolf", wolf))
            .with_component(Component::biotic("sheep", "Sheep", BioticParams::default()))
            .with_relationship(Relationship::new(
                "r",
                "wolf",
                "sheep",
                Interaction::Consumes {
                    interaction_probability: Some(0.5),
                    consumption_rate: None,
                },
            ));
        let once = apply_defaults(m);
        let twice = apply_defaults(once.clone());
        assert_eq!(once, twice);
        let p = once.components[0].biotic_params().unwrap();
        assert_eq!(p.lifespan, Some(180));
        assert_eq!(p.assimilation_efficiency, Some(0.4));
        assert_eq!(
            once.relationships[0].interaction,
            Interaction::Consumes {
                interaction_probability: Some(0.5),
                consumption_rate: Some(0.2),
            }
        );
    }
}
