//! Acceptance criteria. Run with `cargo test -p ecoloom-acceptance`;
//! prints one PASS/FAIL line per criterion and fails if any criterion does.

#[path = "../../core/tests/support/mod.rs"]
mod support;

use ecoloom::compiler::{compile, emit_netlogo, SimProgram};
use ecoloom::engine::{init_world, run, tick, EngineConfig, Simulation, TimeSeries};
use ecoloom::exemplars::{load_exemplar, ExemplarId};
use ecoloom::export::to_csv;
use ecoloom::model::{Component, ConceptualModel, Interaction, Relationship};
use ecoloom_acceptance::{quota, run_all, Check, Outcome};
use ecoloom_eol::{bundled_fixtures, EolClient};
use proptest::strategy::{Strategy, ValueTree};
use proptest::test_runner::{Config, TestRng, TestRunner};
use std::time::Instant;

const SEEDS: std::ops::RangeInclusive<u64> = 1..=20;
const QUOTA: usize = 16; // 80% of 20 seeds
const RUN_BUDGET_SECS: f64 = 5.0;

fn exemplar(id: ExemplarId) -> (SimProgram, EngineConfig) {
    let (model, config) = load_exemplar(id);
    (compile(&model).expect("exemplar compiles"), config)
}

fn seeded(id: ExemplarId, seed: u64, ticks: u32) -> TimeSeries {
    let (program, config) = exemplar(id);
    run(&program, &config.with_seed(seed).with_ticks(ticks)).expect("exemplar runs")
}

fn determinism() -> Outcome {
    let mut slowest = 0.0f64;
    for id in ExemplarId::ALL {
        let (program, config) = exemplar(id);
        let config = config.with_ticks(120);
        let mut outputs = Vec::new();
        for _ in 0..2 {
            let started = Instant::now();
            let csv = to_csv(&run(&program, &config).map_err(|e| e.to_string())?);
            let secs = started.elapsed().as_secs_f64();
            slowest = slowest.max(secs);
            if secs >= RUN_BUDGET_SECS {
                return Err(format!("{id}: 120-tick run took {secs:.2}s"));
            }
            outputs.push(csv);
        }
        if outputs[0] != outputs[1] {
            return Err(format!("{id}: CSV bytes differ between identical runs"));
        }
    }
    Ok(format!("4 exemplars byte-identical, slowest run {slowest:.2}s"))
}

fn oracle_equivalence() -> Outcome {
    let scenarios = support::trace_scenarios();
    for s in &scenarios {
        support::compare_with_oracle(s, 20).map_err(|e| format!("{}: {e}", s.name))?;
    }
    Ok(format!("{} hand-trace worlds agree for 20 ticks", scenarios.len()))
}

fn consumption_arithmetic() -> Outcome {
    let model = ConceptualModel::new("pair")
        .with_component(Component::biotic("wolf", "Wolf", support::inert(30.0)))
        .with_component(Component::biotic("sheep", "Sheep", support::inert(19.66)))
        .with_relationship(Relationship::new(
            "eat",
            "wolf",
            "sheep",
            Interaction::consumes(1.0, 0.2),
        ));
    let program = compile(&model).map_err(|e| e.to_string())?;
    let mut world = support::hand_world(&program, &EngineConfig::default(), &[(0, 4.0, 4.0), (1, 4.0, 4.0)]);
    tick(&mut world, &program);
    let wolf = world.agent(0).ok_or("wolf gone")?.carbon_biomass;
    let sheep = world.agent(1).ok_or("sheep gone")?.carbon_biomass;
    if (wolf - 33.932).abs() <= 1e-9 && (sheep - 15.728).abs() <= 1e-9 {
        Ok(format!("wolf {wolf:.6}, sheep {sheep:.6}"))
    } else {
        Err(format!("wolf {wolf}, sheep {sheep}"))
    }
}

fn predator_prey_cycles() -> Outcome {
    let mut passed = 0;
    let mut misses = Vec::new();
    for seed in SEEDS {
        let sheep = seeded(ExemplarId::PredatorPrey, seed, 120).series(1);
        let peaks = support::prominent_peaks(&sheep, 1.2);
        if peaks >= 2 {
            passed += 1;
        } else {
            misses.push(format!("seed {seed}: {peaks} peak(s)"));
        }
    }
    quota("seeds with >=2 sheep peaks at 1.2x", passed, 20, QUOTA, &misses)
}

fn logistic_shape() -> Outcome {
    let ticks = 120;
    let mut passed = 0;
    let mut misses = Vec::new();
    for seed in SEEDS {
        let rabbits = seeded(ExemplarId::LogisticGrowth, seed, ticks).series(0);
        let quarter = rabbits[ticks as usize / 4];
        let last = *rabbits.last().unwrap();
        let tail = &rabbits[3 * ticks as usize / 4..];
        let mean = tail.iter().sum::<f64>() / tail.len() as f64;
        let grew = quarter >= 2.0 * rabbits[0];
        let settled = last > 0.0 && (mean - last).abs() <= 0.1 * last;
        if grew && settled {
            passed += 1;
        } else {
            misses.push(format!(
                "seed {seed}: start {} quarter {quarter} tail mean {mean:.1} last {last}",
                rabbits[0]
            ));
        }
    }
    quota("logistic seeds", passed, 20, QUOTA, &misses)
}

fn exponential_and_cap() -> Outcome {
    let (program, config) = exemplar(ExemplarId::ExponentialGrowth);
    let mut capped_at = Vec::new();
    for seed in 1..=3 {
        let cap = config.max_agents;
        let sim = Simulation::new(program.clone(), &config.clone().with_seed(seed).with_ticks(120))
            .map_err(|e| e.to_string())?;
        let mut previous = 0.0;
        let mut hit = None;
        let mut sim = sim;
        while let Some(record) = sim.next() {
            let live = sim.world().live_count();
            if live > cap {
                return Err(format!("seed {seed}, tick {}: {live} live agents", record.tick));
            }
            let count = record.counts[0];
            if hit.is_none() && count < previous {
                return Err(format!(
                    "seed {seed}, tick {}: fell from {previous} to {count}",
                    record.tick
                ));
            }
            if hit.is_none() && live == cap {
                hit = Some(record.tick);
            }
            previous = count;
        }
        capped_at.push(match hit {
            Some(t) => format!("seed {seed} capped at tick {t}"),
            None => format!("seed {seed} never capped"),
        });
    }
    Ok(format!(
        "monotone to the cap, never above 25000 ({})",
        capped_at.join(", ")
    ))
}

fn competitive_exclusion() -> Outcome {
    let mut passed = 0;
    let mut misses = Vec::new();
    for seed in SEEDS {
        let series = seeded(ExemplarId::CompetitiveExclusion, seed, 200);
        let excluded = [0, 1].into_iter().find_map(|c| {
            series
                .series(c)
                .iter()
                .position(|&n| n <= 0.0)
                .map(|t| (series.names[c].clone(), t))
        });
        match excluded {
            Some(_) => passed += 1,
            None => misses.push(format!("seed {seed}: both competitors persist")),
        }
    }
    quota(
        "seeds with a competitor excluded by tick 200",
        passed,
        20,
        QUOTA,
        &misses,
    )
}

fn codegen_golden() -> Outcome {
    let (model, _) = load_exemplar(ExemplarId::PredatorPrey);
    let text = emit_netlogo(&compile(&model).map_err(|e| e.to_string())?);
    let again = emit_netlogo(&compile(&model).map_err(|e| e.to_string())?);
    if text != again {
        return Err("emitted code differs between compilations".into());
    }
    let start = text
        .find("to consumes-wolf-sheep")
        .ok_or("no wolf-consumes-sheep procedure")?;
    let end = start + text[start..].find("\nend").ok_or("procedure never ends")?;
    let body = &text[start..end];
    let at = |needle: &str| body.find(needle).ok_or(format!("missing `{needle}`"));
    let guard = at("random-float 1 <")?;
    let loss = at("carbon-biomass - amount")?;
    let gain = at("carbon-biomass + amount")?;
    let removal = at("<= 0 [ ask prey [ die ] ]")?;
    if guard < loss && loss < gain && gain < removal {
        Ok("guard, transfer, removal in order; byte-stable".into())
    } else {
        Err(format!(
            "out of order: guard {guard}, loss {loss}, gain {gain}, removal {removal}"
        ))
    }
}

fn csv_format() -> Outcome {
    let series = seeded(ExemplarId::PredatorPrey, 7, 11);
    let csv = to_csv(&series);
    let rows: Vec<&str> = csv.lines().collect();
    if rows.first() != Some(&"Month,Wolf,Sheep,Grass") {
        return Err(format!("header {:?}", rows.first()));
    }
    if rows.len() != 13 || !csv.ends_with('\n') {
        return Err(format!("{} lines", rows.len()));
    }
    for (month, row) in rows[1..].iter().enumerate() {
        let fields: Vec<&str> = row.split(',').collect();
        if fields.len() != 4 || fields[0] != month.to_string() {
            return Err(format!("row {month}: `{row}`"));
        }
        if fields.iter().any(|f| f.parse::<i64>().is_err()) {
            return Err(format!("row {month} has a non-integer field: `{row}`"));
        }
    }
    Ok("Month plus one integer column per component, 12 rows".into())
}

fn randomized_invariants() -> Outcome {
    const CASES: usize = 50;
    const TICKS: usize = 200;
    let mut runner = TestRunner::new_with_rng(
        Config::default(),
        TestRng::deterministic_rng(Config::default().rng_algorithm),
    );
    let strategy = support::arb_world();
    let mut total = 0;
    for case in 0..CASES {
        let (model, seed) = strategy.new_tree(&mut runner).map_err(|e| e.to_string())?.current();
        let program = compile(&model).map_err(|e| e.to_string())?;
        let config = EngineConfig {
            max_agents: 400,
            ..EngineConfig::default().with_seed(seed)
        };
        let mut world = init_world(&program, &config).map_err(|e| e.to_string())?;
        for t in 1..=TICKS {
            let record = tick(&mut world, &program);
            total += 1;
            if record.counts.iter().any(|c| *c < 0.0) {
                return Err(format!(
                    "case {case}, tick {t}: negative population {:?}",
                    record.counts
                ));
            }
            support::check_invariants(&world, &program).map_err(|e| format!("case {case}, tick {t}: {e}"))?;
        }
    }
    Ok(format!("{total} ticks over {CASES} random worlds"))
}

fn eol_mapping() -> Outcome {
    let client = EolClient::with_fixtures(bundled_fixtures());
    let found = client
        .lookup("gray wolf")
        .map_err(|e| e.to_string())?
        .ok_or("no candidate for gray wolf")?;
    if found.candidate.scientific_name != "Canis lupus" {
        return Err(format!("first candidate {}", found.candidate.scientific_name));
    }
    let p = &found.estimate.params;
    if p.lifespan == Some(180) && p.body_mass == Some(30.0) {
        Ok("Canis lupus: lifespan 180 months, body_mass 30 kg".into())
    } else {
        Err(format!("lifespan {:?}, body_mass {:?}", p.lifespan, p.body_mass))
    }
}

fn main() {
    let checks = [
        Check {
            name: "determinism",
            run: determinism,
        },
        Check {
            name: "oracle equivalence",
            run: oracle_equivalence,
        },
        Check {
            name: "consumption arithmetic",
            run: consumption_arithmetic,
        },
        Check {
            name: "predator-prey shape",
            run: predator_prey_cycles,
        },
        Check {
            name: "logistic shape",
            run: logistic_shape,
        },
        Check {
            name: "exponential shape and cap",
            run: exponential_and_cap,
        },
        Check {
            name: "competitive exclusion",
            run: competitive_exclusion,
        },
        Check {
            name: "codegen golden",
            run: codegen_golden,
        },
        Check {
            name: "csv format",
            run: csv_format,
        },
        Check {
            name: "torus and non-negativity",
            run: randomized_invariants,
        },
        Check {
            name: "eol mapping",
            run: eol_mapping,
        },
    ];
    if run_all(&checks) > 0 {
        std::process::exit(1);
    }
}
