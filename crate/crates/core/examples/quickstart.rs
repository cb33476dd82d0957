//! Build a grazer and its food plant in code, run it and print the CSV.

use ecoloom::compiler::compile;
use ecoloom::engine::{run, EngineConfig};
use ecoloom::export::to_csv;
use ecoloom::model::{BioticParams, Component, ConceptualModel, Interaction, Relationship};

fn main() {
    let hare = BioticParams {
        respiratory_rate: Some(2e-7),
        assimilation_efficiency: Some(0.6),
        move_velocity: Some(3e-7),
        lifespan: Some(36),
        reproductive_maturity: Some(4),
        reproductive_interval: Some(3),
        offspring_count: Some(1),
        starting_population: Some(80),
        body_mass: Some(2.0),
        ..Default::default()
    };
    let heather = BioticParams {
        starting_population: Some(900),
        minimum_population: Some(900),
        body_mass: Some(1.0),
        ..Default::default()
    };
    let model = ConceptualModel::new("Hare and heather")
        .with_component(Component::biotic("hare", "Hare", hare))
        .with_component(Component::biotic("heather", "Heather", heather))
        .with_relationship(Relationship::new(
            "graze",
            "hare",
            "heather",
            Interaction::consumes(0.8, 1.0),
        ));

    let program = compile(&model).expect("model is valid");
    let config = EngineConfig::default().with_seed(42).with_ticks(36);
    let series = run(&program, &config).expect("world fits");
    print!("{}", to_csv(&series));
}
