//! Consume records one tick at a time, stopping early when the sheep
//! population first halves.

use ecoloom::compiler::compile;
use ecoloom::engine::Simulation;
use ecoloom::exemplars::{load_exemplar, ExemplarId};

fn main() {
    let (model, config) = load_exemplar(ExemplarId::PredatorPrey);
    let mut sim = Simulation::new(compile(&model).unwrap(), &config).unwrap();
    let first = sim.next().unwrap();
    let start = first.counts[1];
    for record in sim.by_ref() {
        println!("tick {:>3}: {:?}", record.tick, record.counts);
        if record.counts[1] <= start / 2.0 {
            println!("sheep halved by tick {}", record.tick);
            break;
        }
    }
    println!("{} live agents when stopped", sim.world().live_count());
}
