//! Print the NetLogo program generated for the predator-prey exemplar.
//!
//! `cargo run --example compile_netlogo -- competitive_exclusion` picks
//! another exemplar.

use ecoloom::compiler::{compile, emit_netlogo_with};
use ecoloom::exemplars::{load_exemplar, ExemplarId};

fn main() {
    let id: ExemplarId = std::env::args()
        .nth(1)
        .map(|s| s.parse().expect("known exemplar"))
        .unwrap_or(ExemplarId::PredatorPrey);
    let (model, config) = load_exemplar(id);
    let program = compile(&model).expect("exemplar compiles");
    for skipped in &program.no_ops {
        eprintln!("no-op: {skipped:?}");
    }
    print!("{}", emit_netlogo_with(&program, &config));
}
