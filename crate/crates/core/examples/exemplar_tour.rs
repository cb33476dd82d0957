//! Run each shipped exemplar and summarise its populations.

use ecoloom::compiler::compile;
use ecoloom::engine::run;
use ecoloom::exemplars::{load_exemplar, ExemplarId};

fn main() {
    for id in ExemplarId::ALL {
        let (model, config) = load_exemplar(id);
        let series = run(&compile(&model).unwrap(), &config).unwrap();
        println!("{} ({} ticks, seed {})", id.title(), config.max_ticks, config.rng_seed);
        for (column, name) in series.names.iter().enumerate() {
            let values = series.series(column);
            let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
            let max = values.iter().cloned().fold(0.0, f64::max);
            let last = values.last().unwrap();
            println!(
                "  {name:<8} start {:>6}  min {min:>6}  max {max:>6}  end {last:>6}",
                values[0]
            );
        }
    }
}
