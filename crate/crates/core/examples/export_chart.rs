//! Write a run's CSV and SVG line chart into a directory (default: the
//! system temp dir).

use ecoloom::compiler::compile;
use ecoloom::engine::run;
use ecoloom::exemplars::{load_exemplar, ExemplarId};
use ecoloom::export::{to_csv, to_svg};
use std::path::PathBuf;

fn main() -> std::io::Result<()> {
    let dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(std::env::temp_dir);
    let (model, config) = load_exemplar(ExemplarId::PredatorPrey);
    let series = run(&compile(&model).unwrap(), &config).unwrap();
    let csv = dir.join("predator_prey.csv");
    let svg = dir.join("predator_prey.svg");
    std::fs::write(&csv, to_csv(&series))?;
    std::fs::write(&svg, to_svg(&series, &model.name))?;
    println!("wrote {} and {}", csv.display(), svg.display());
    Ok(())
}
