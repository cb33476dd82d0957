#![allow(dead_code)]

pub mod oracle;

use ecoloom::compiler::{compile, SimProgram};
use ecoloom::engine::{init_world, tick, EngineConfig, WorldState};
use ecoloom::model::{AbioticParams, BioticParams, Component, ConceptualModel, Interaction, Relationship};
use oracle::Oracle;
use proptest::prelude::*;

/// Fully specified biotic parameters with nothing switched on.
pub fn inert(body_mass: f64) -> BioticParams {
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
        body_mass: Some(body_mass),
    }
}

/// An empty world of the program's breeds with agents placed by hand.
pub fn hand_world(program: &SimProgram, config: &EngineConfig, placements: &[(usize, f64, f64)]) -> WorldState {
    let mut world = init_world(program, config).unwrap();
    for &(breed, x, y) in placements {
        world
            .place_agent(program, breed, x, y)
            .unwrap()
            .expect("room for agent");
    }
    world
}

pub struct Scenario {
    pub name: &'static str,
    pub model: ConceptualModel,
    pub placements: Vec<(usize, f64, f64)>,
}

/// Hand-traceable worlds: at most three agents at the start, probabilities
/// 0 or 1, nobody moves.
pub fn trace_scenarios() -> Vec<Scenario> {
    let grazing = ConceptualModel::new("grazing pair")
        .with_component(Component::biotic(
            "sheep",
            "Sheep",
            BioticParams {
                respiratory_rate: Some(1e-7),
                assimilation_efficiency: Some(0.6),
                ..inert(19.66)
            },
        ))
        .with_component(Component::biotic(
            "grass",
            "Grass",
            BioticParams {
                photosynthesis_rate: Some(5e-7),
                ..inert(5.0)
            },
        ))
        .with_relationship(Relationship::new(
            "eat",
            "sheep",
            "grass",
            Interaction::consumes(1.0, 0.3),
        ));

    let trio = ConceptualModel::new("predator trio")
        .with_component(Component::biotic(
            "wolf",
            "Wolf",
            BioticParams {
                respiratory_rate: Some(2e-6),
                assimilation_efficiency: Some(0.8),
                lifespan: Some(15),
                ..inert(30.0)
            },
        ))
        .with_component(Component::biotic(
            "sheep",
            "Sheep",
            BioticParams {
                respiratory_rate: Some(3e-7),
                assimilation_efficiency: Some(0.5),
                reproductive_maturity: Some(3),
                reproductive_interval: Some(4),
                offspring_count: Some(1),
                ..inert(19.66)
            },
        ))
        .with_component(Component::biotic(
            "grass",
            "Grass",
            BioticParams {
                photosynthesis_rate: Some(1e-6),
                ..inert(5.0)
            },
        ))
        .with_relationship(Relationship::new(
            "w",
            "wolf",
            "sheep",
            Interaction::consumes(1.0, 0.25),
        ))
        .with_relationship(Relationship::new(
            "s",
            "sheep",
            "grass",
            Interaction::consumes(1.0, 0.5),
        ))
        .with_relationship(Relationship::new("d", "wolf", "grass", Interaction::destroys(0.0, 1.0)));

    let beetles = ConceptualModel::new("beetles and tree")
        .with_component(Component::biotic(
            "beetle",
            "Beetle",
            BioticParams {
                respiratory_rate: Some(3e-9),
                lifespan: Some(7),
                reproductive_maturity: Some(3),
                reproductive_interval: Some(3),
                offspring_count: Some(1),
                ..inert(0.1)
            },
        ))
        .with_component(Component::biotic(
            "tree",
            "Tree",
            BioticParams {
                photosynthesis_rate: Some(3e-6),
                ..inert(100.0)
            },
        ))
        .with_relationship(Relationship::new(
            "bore",
            "beetle",
            "tree",
            Interaction::destroys(1.0, 0.1),
        ));

    let tie = ConceptualModel::new("equidistant prey")
        .with_component(Component::biotic(
            "fox",
            "Fox",
            BioticParams {
                respiratory_rate: Some(1e-6),
                ..inert(6.0)
            },
        ))
        .with_component(Component::biotic("hen", "Hen", inert(2.0)))
        .with_relationship(Relationship::new("hunt", "fox", "hen", Interaction::consumes(1.0, 1.0)));

    vec![
        Scenario {
            name: "grazing pair",
            model: grazing,
            placements: vec![(0, 5.0, 5.0), (1, 5.5, 5.0)],
        },
        Scenario {
            name: "predator trio across the seam",
            model: trio,
            placements: vec![(0, 0.2, 0.2), (1, 31.8, 0.2), (2, 31.5, 31.6)],
        },
        Scenario {
            name: "beetles and tree",
            model: beetles,
            placements: vec![(0, 10.0, 10.0), (1, 10.6, 10.6), (0, 20.0, 20.0)],
        },
        Scenario {
            name: "equidistant prey",
            model: tie,
            placements: vec![(0, 8.0, 8.0), (1, 8.5, 8.0), (1, 7.5, 8.0)],
        },
    ]
}

/// Runs engine and oracle side by side, comparing after every tick.
pub fn compare_with_oracle(s: &Scenario, ticks: u32) -> Result<(), String> {
    let config = EngineConfig::default();
    let program = compile(&s.model).map_err(|e| e.to_string())?;
    let mut world = hand_world(&program, &config, &s.placements);
    let mut oracle = Oracle::new(
        &s.model,
        f64::from(config.grid_size),
        config.seconds_per_tick * config.rate_scale,
        config.interaction_radius,
    );
    for &(breed, x, y) in &s.placements {
        oracle.place(breed, x, y);
    }
    for t in 1..=ticks {
        let record = tick(&mut world, &program);
        oracle.step();
        for (b, count) in record.counts.iter().enumerate() {
            if *count != oracle.count(b) as f64 {
                return Err(format!("tick {t}: breed {b} engine {count} oracle {}", oracle.count(b)));
            }
        }
        let engine: Vec<_> = world.live_agents().collect();
        if engine.len() != oracle.agents.len() {
            return Err(format!("tick {t}: {} agents vs {}", engine.len(), oracle.agents.len()));
        }
        for (a, o) in engine.iter().zip(&oracle.agents) {
            if a.id != o.id || a.breed != o.breed || a.age != o.age || a.x != o.x || a.y != o.y {
                return Err(format!("tick {t}: agent mismatch {a:?} vs {o:?}"));
            }
            if (a.carbon_biomass - o.biomass).abs() > 1e-9 {
                return Err(format!(
                    "tick {t}: agent {} biomass {} vs {}",
                    a.id, a.carbon_biomass, o.biomass
                ));
            }
        }
    }
    Ok(())
}

/// Local maxima that stand at least `ratio` times above the lowest point
/// on each side before the series next climbs higher (or ends).
pub fn prominent_peaks(series: &[f64], ratio: f64) -> usize {
    let n = series.len();
    let mut count = 0;
    for i in 0..n {
        let v = series[i];
        let rises_into = i == 0 || series[i - 1] < v;
        let falls_after = i + 1 < n && series[i + 1] <= v;
        if v <= 0.0 || !rises_into || !falls_after {
            continue;
        }
        let left = series[..i]
            .iter()
            .rev()
            .take_while(|&&s| s <= v)
            .fold(v, |m, &s| m.min(s));
        let right = series[i + 1..]
            .iter()
            .take_while(|&&s| s <= v)
            .fold(v, |m, &s| m.min(s));
        if v >= ratio * left && v >= ratio * right {
            count += 1;
        }
    }
    count
}

/// Checks the per-tick engine invariants; `Err` names the first breach.
pub fn check_invariants(world: &WorldState, program: &SimProgram) -> Result<(), String> {
    let side = f64::from(world.config().grid_size);
    let mut live = 0;
    for a in world.live_agents() {
        live += 1;
        if !(0.0..side).contains(&a.x) || !(0.0..side).contains(&a.y) {
            return Err(format!("agent {} off the torus at ({}, {})", a.id, a.x, a.y));
        }
        if !(a.carbon_biomass > 0.0) {
            return Err(format!("live agent {} has biomass {}", a.id, a.carbon_biomass));
        }
        let limit = program.breeds[a.breed].params.lifespan;
        if limit > 0 && a.age > limit {
            return Err(format!("agent {} aged {} past lifespan {limit}", a.id, a.age));
        }
    }
    if live > world.config().max_agents {
        return Err(format!("{live} agents above the ceiling"));
    }
    for p in 0..program.pools.len() {
        let amount = world.pool_amount(p).unwrap();
        if !(amount >= 0.0) {
            return Err(format!("pool {p} at {amount}"));
        }
    }
    for m in 0..program.methods.len() {
        if !(world.accumulator(m) >= 0.0) {
            return Err(format!("accumulator {m} at {}", world.accumulator(m)));
        }
    }
    Ok(())
}

/// Two breeds and a pool joined by every relationship kind, with the
/// rates drawn at random.
pub fn arb_world() -> impl Strategy<Value = (ConceptualModel, u64)> {
    (
        0.0..360.0f64,
        0.0..2e-5f64,
        1u32..40,
        0.0..1.0f64,
        0.0..1.0f64,
        -0.9..1.0f64,
        any::<u64>(),
    )
        .prop_map(|(dir, vel, start, prob, rate, growth, seed)| {
            let runner = BioticParams {
                move_direction: Some(dir),
                move_velocity: Some(vel),
                respiratory_rate: Some(1e-8),
                lifespan: Some(30),
                reproductive_interval: Some(3),
                offspring_count: Some(2),
                starting_population: Some(start),
                ..inert(1.0)
            };
            let patch = BioticParams {
                starting_population: Some(start),
                minimum_population: Some(20),
                photosynthesis_rate: Some(1e-8),
                ..inert(2.0)
            };
            let m = ConceptualModel::new("arb")
                .with_component(Component::biotic("runner", "Runner", runner))
                .with_component(Component::biotic("patch", "Patch", patch))
                .with_component(Component::abiotic(
                    "water",
                    "Water",
                    AbioticParams {
                        amount: Some(50.0),
                        minimum_amount: Some(10.0),
                        growth_rate: Some(0.0),
                    },
                ))
                .with_relationship(Relationship::new(
                    "a",
                    "runner",
                    "patch",
                    Interaction::consumes(prob, rate),
                ))
                .with_relationship(Relationship::new(
                    "b",
                    "runner",
                    "water",
                    Interaction::destroys(prob, rate),
                ))
                .with_relationship(Relationship::new(
                    "c",
                    "patch",
                    "water",
                    Interaction::affects(prob, growth),
                ))
                .with_relationship(Relationship::new(
                    "d",
                    "water",
                    "runner",
                    Interaction::affects(prob, growth),
                ))
                .with_relationship(Relationship::new("e", "patch", "runner", Interaction::produces(1e-7)));
            (m, seed)
        })
}
