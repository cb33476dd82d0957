//! NetLogo-dialect text backend.
//!
//! The output only uses the small language subset the engine mirrors:
//! `breed`, `turtles-own`, `globals`, `startup`, `setup`, `go`, `ask`,
//! `create-*`, `hatch`, `die`, `fd`, `in-radius`, `min-one-of`,
//! `random-float`. World dimensions (32x32, wrapping) are set in the model
//! file, not in code. Output is LF-terminated and a pure function of the
//! program and configuration.

use super::ir::*;
use super::lower::procedure_slug;
use crate::engine::EngineConfig;
use crate::model::BioticParams;
use std::fmt::Write;

pub fn emit_netlogo(program: &SimProgram) -> String {
    emit_netlogo_with(program, &EngineConfig::default())
}

fn num(v: f64) -> String {
    if v.fract() == 0.0 && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else {
        format!("{v:?}")
    }
}

struct Names<'a> {
    program: &'a SimProgram,
}

impl Names<'_> {
    fn breed_slug(&self, breed: usize) -> String {
        procedure_slug(&self.program.breeds[breed].component_id)
    }

    fn agents(&self, breed: usize) -> String {
        format!("{}-agents", self.breed_slug(breed))
    }

    fn agent(&self, breed: usize) -> String {
        format!("{}-agent", self.breed_slug(breed))
    }

    fn breed_var(&self, breed: usize, param: &str) -> String {
        format!("{}-{}", self.breed_slug(breed), param.replace('_', "-"))
    }

    fn pool_var(&self, pool: usize) -> String {
        format!("{}-amount", procedure_slug(&self.program.pools[pool].component_id))
    }
}

pub fn emit_netlogo_with(program: &SimProgram, cfg: &EngineConfig) -> String {
    let names = Names { program };
    let mut out = String::new();
    let o = &mut out;

    writeln!(o, "; model: {}", program.model_name.replace('\n', " ")).unwrap();
    writeln!(o, "; generated code, do not edit").unwrap();
    writeln!(o).unwrap();

    for b in 0..program.breeds.len() {
        writeln!(o, "breed [{} {}]", names.agents(b), names.agent(b)).unwrap();
    }
    writeln!(o, "turtles-own [age carbon-biomass]").unwrap();

    let mut globals = vec![
        "seconds-per-tick".to_string(),
        "meters-per-cell".to_string(),
        "rate-scale".to_string(),
        "interaction-radius".to_string(),
        "wiggle-degrees".to_string(),
        "replenish-fraction".to_string(),
        "max-agents".to_string(),
    ];
    for b in 0..program.breeds.len() {
        for key in BioticParams::KEYS {
            globals.push(names.breed_var(b, key));
        }
        globals.push(names.breed_var(b, "growth_boost"));
        globals.push(names.breed_var(b, "growth_boost_next"));
    }
    for p in 0..program.pools.len() {
        globals.push(names.pool_var(p));
    }
    for m in &program.methods {
        if matches!(m.op, Op::Produce { .. }) {
            globals.push(format!("{}-accumulator", m.name));
        }
    }
    writeln!(o, "globals [").unwrap();
    for g in &globals {
        writeln!(o, "  {g}").unwrap();
    }
    writeln!(o, "]").unwrap();
    writeln!(o).unwrap();

    // startup: model parameters
    writeln!(o, "to startup").unwrap();
    writeln!(o, "  set seconds-per-tick {}", num(cfg.seconds_per_tick)).unwrap();
    writeln!(o, "  set meters-per-cell {}", num(cfg.meters_per_cell)).unwrap();
    writeln!(o, "  set rate-scale {}", num(cfg.rate_scale)).unwrap();
    writeln!(o, "  set interaction-radius {}", num(cfg.interaction_radius)).unwrap();
    writeln!(o, "  set wiggle-degrees {}", num(cfg.wiggle_degrees)).unwrap();
    writeln!(o, "  set replenish-fraction {}", num(cfg.replenish_fraction)).unwrap();
    writeln!(o, "  set max-agents {}", cfg.max_agents).unwrap();
    for (b, breed) in program.breeds.iter().enumerate() {
        let p = &breed.params;
        let values = [
            p.carbon_biomass,
            p.respiratory_rate,
            p.photosynthesis_rate,
            p.assimilation_efficiency,
            p.move_direction,
            p.move_velocity,
            f64::from(p.lifespan),
            f64::from(p.reproductive_maturity),
            f64::from(p.reproductive_interval),
            f64::from(p.offspring_count),
            f64::from(p.starting_population),
            f64::from(p.minimum_population),
            p.body_mass,
        ];
        for (key, value) in BioticParams::KEYS.iter().zip(values) {
            writeln!(o, "  set {} {}", names.breed_var(b, key), num(value)).unwrap();
        }
        writeln!(o, "  set {} 1", names.breed_var(b, "growth_boost")).unwrap();
        writeln!(o, "  set {} 1", names.breed_var(b, "growth_boost_next")).unwrap();
    }
    for (p, pool) in program.pools.iter().enumerate() {
        writeln!(o, "  set {} {}", names.pool_var(p), num(pool.amount)).unwrap();
    }
    for m in &program.methods {
        if matches!(m.op, Op::Produce { .. }) {
            writeln!(o, "  set {}-accumulator 0", m.name).unwrap();
        }
    }
    writeln!(o, "end").unwrap();
    writeln!(o).unwrap();

    // setup: individual agents
    writeln!(o, "to setup").unwrap();
    writeln!(o, "  clear-turtles").unwrap();
    writeln!(o, "  reset-ticks").unwrap();
    for b in 0..program.breeds.len() {
        writeln!(
            o,
            "  create-{} {} [ init-{} setxy random-xcor random-ycor ]",
            names.agents(b),
            names.breed_var(b, "starting_population"),
            names.agent(b)
        )
        .unwrap();
    }
    writeln!(o, "end").unwrap();
    writeln!(o).unwrap();

    for b in 0..program.breeds.len() {
        writeln!(o, "to init-{}", names.agent(b)).unwrap();
        writeln!(o, "  set age 0").unwrap();
        writeln!(o, "  set heading random-float 360").unwrap();
        writeln!(
            o,
            "  ifelse {cb} > 0 [ set carbon-biomass {cb} ] [ set carbon-biomass {bm} ]",
            cb = names.breed_var(b, "carbon_biomass"),
            bm = names.breed_var(b, "body_mass")
        )
        .unwrap();
        writeln!(o, "end").unwrap();
        writeln!(o).unwrap();
    }

    // go loop
    writeln!(o, "to go").unwrap();
    for b in 0..program.breeds.len() {
        writeln!(
            o,
            "  set {} {}",
            names.breed_var(b, "growth_boost"),
            names.breed_var(b, "growth_boost_next")
        )
        .unwrap();
        writeln!(o, "  set {} 1", names.breed_var(b, "growth_boost_next")).unwrap();
    }
    for m in &program.methods {
        writeln!(o, "  {}", m.name).unwrap();
    }
    writeln!(o, "  ask turtles [ set age age + 1 ]").unwrap();
    writeln!(o, "  tick").unwrap();
    writeln!(o, "end").unwrap();

    for m in &program.methods {
        writeln!(o).unwrap();
        writeln!(o, "to {}", m.name).unwrap();
        procedure_body(o, &names, m);
        writeln!(o, "end").unwrap();
    }
    out
}

fn target_set(names: &Names<'_>, target: usize) -> String {
    format!(
        "min-one-of (other {} in-radius interaction-radius) [distance myself]",
        names.agents(target)
    )
}

fn procedure_body(o: &mut String, names: &Names<'_>, m: &MethodDef) {
    match &m.op {
        Op::Lifespan { breed, .. } => {
            writeln!(
                o,
                "  ask {} [ if age >= {} [ die ] ]",
                names.agents(*breed),
                names.breed_var(*breed, "lifespan")
            )
            .unwrap();
        }
        Op::MinimumPopulation { breed, .. } => {
            let b = *breed;
            writeln!(
                o,
                "  let deficit {} - count {}",
                names.breed_var(b, "minimum_population"),
                names.agents(b)
            )
            .unwrap();
            writeln!(o, "  if deficit > 0 [").unwrap();
            writeln!(
                o,
                "    let spawn floor (ceiling (replenish-fraction * deficit) * {})",
                names.breed_var(b, "growth_boost")
            )
            .unwrap();
            writeln!(o, "    set spawn min (list spawn (max-agents - count turtles))").unwrap();
            writeln!(
                o,
                "    create-{} spawn [ init-{} setxy random-xcor random-ycor ]",
                names.agents(b),
                names.agent(b)
            )
            .unwrap();
            writeln!(o, "  ]").unwrap();
        }
        Op::Biomass { breed, .. } => {
            let b = *breed;
            writeln!(o, "  ask {} [", names.agents(b)).unwrap();
            writeln!(
                o,
                "    set carbon-biomass carbon-biomass + ({} - {}) * seconds-per-tick * rate-scale",
                names.breed_var(b, "photosynthesis_rate"),
                names.breed_var(b, "respiratory_rate")
            )
            .unwrap();
            writeln!(o, "    if carbon-biomass <= 0 [ die ]").unwrap();
            writeln!(o, "  ]").unwrap();
        }
        Op::Reproduction { breed, .. } => {
            let b = *breed;
            let maturity = names.breed_var(b, "reproductive_maturity");
            writeln!(o, "  ask {} [", names.agents(b)).unwrap();
            writeln!(
                o,
                "    if age >= {maturity} and (age - {maturity}) mod {} = 0 [",
                names.breed_var(b, "reproductive_interval")
            )
            .unwrap();
            writeln!(
                o,
                "      let offspring floor ({} * {})",
                names.breed_var(b, "offspring_count"),
                names.breed_var(b, "growth_boost")
            )
            .unwrap();
            writeln!(
                o,
                "      set offspring min (list offspring (max-agents - count turtles))"
            )
            .unwrap();
            writeln!(
                o,
                "      if offspring > 0 [ hatch offspring [ init-{} ] ]",
                names.agent(b)
            )
            .unwrap();
            writeln!(o, "    ]").unwrap();
            writeln!(o, "  ]").unwrap();
        }
        Op::Movement { breed, .. } => {
            let b = *breed;
            writeln!(o, "  ask {} [", names.agents(b)).unwrap();
            writeln!(
                o,
                "    set heading {} - wiggle-degrees + random-float (2 * wiggle-degrees)",
                names.breed_var(b, "move_direction")
            )
            .unwrap();
            writeln!(
                o,
                "    fd min (list ({} * seconds-per-tick / meters-per-cell) world-width)",
                names.breed_var(b, "move_velocity")
            )
            .unwrap();
            writeln!(o, "  ]").unwrap();
        }
        Op::Consume {
            source,
            target,
            probability,
            rate,
        } => {
            writeln!(o, "  ask {} [", names.agents(*source)).unwrap();
            writeln!(o, "    let prey {}", target_set(names, *target)).unwrap();
            writeln!(o, "    if prey != nobody [").unwrap();
            writeln!(o, "      if random-float 1 < {} [", num(*probability)).unwrap();
            writeln!(o, "        let amount {} * [carbon-biomass] of prey", num(*rate)).unwrap();
            writeln!(o, "        ask prey [ set carbon-biomass carbon-biomass - amount ]").unwrap();
            writeln!(
                o,
                "        set carbon-biomass carbon-biomass + amount * {}",
                names.breed_var(*source, "assimilation_efficiency")
            )
            .unwrap();
            writeln!(o, "        if [carbon-biomass] of prey <= 0 [ ask prey [ die ] ]").unwrap();
            writeln!(o, "      ]").unwrap();
            writeln!(o, "    ]").unwrap();
            writeln!(o, "  ]").unwrap();
        }
        Op::Destroy {
            source,
            target,
            probability,
            rate,
        } => {
            writeln!(o, "  ask {} [", names.agents(*source)).unwrap();
            match target {
                Population::Breed(t) => {
                    writeln!(o, "    let victim {}", target_set(names, *t)).unwrap();
                    writeln!(o, "    if victim != nobody [").unwrap();
                    writeln!(o, "      if random-float 1 < {} [", num(*probability)).unwrap();
                    writeln!(
                        o,
                        "        ask victim [ set carbon-biomass carbon-biomass * (1 - {}) ]",
                        num(*rate)
                    )
                    .unwrap();
                    writeln!(
                        o,
                        "        if {} >= 1 or [carbon-biomass] of victim <= 0 [ ask victim [ die ] ]",
                        num(*rate)
                    )
                    .unwrap();
                    writeln!(o, "      ]").unwrap();
                    writeln!(o, "    ]").unwrap();
                }
                Population::Pool(p) => {
                    let pool = names.pool_var(*p);
                    writeln!(
                        o,
                        "    if random-float 1 < {} [ set {pool} {pool} * (1 - {}) ]",
                        num(*probability),
                        num(*rate)
                    )
                    .unwrap();
                }
            }
            writeln!(o, "  ]").unwrap();
        }
        Op::Affect {
            source,
            target,
            probability,
            growth_rate,
        } => {
            let effect = match target {
                Population::Breed(t) => format!(
                    "set {} {} * (1 + {})",
                    names.breed_var(*t, "growth_boost_next"),
                    names.breed_var(*t, "growth_boost_next"),
                    num(*growth_rate)
                ),
                Population::Pool(p) => {
                    let pool = names.pool_var(*p);
                    format!("set {pool} {pool} * (1 + {})", num(*growth_rate))
                }
            };
            writeln!(o, "  let applied false").unwrap();
            let guard = format!(
                "if not applied and random-float 1 < {} [ {effect} set applied true ]",
                num(*probability)
            );
            match (source, target) {
                (Population::Breed(s), Population::Breed(t)) => {
                    writeln!(o, "  ask {} [", names.agents(*s)).unwrap();
                    writeln!(o, "    if {} != nobody [ {guard} ]", target_set(names, *t)).unwrap();
                    writeln!(o, "  ]").unwrap();
                }
                (Population::Breed(s), Population::Pool(_)) => {
                    writeln!(o, "  ask {} [ {guard} ]", names.agents(*s)).unwrap();
                }
                (Population::Pool(p), _) => {
                    writeln!(o, "  if {} > 0 [ {guard} ]", names.pool_var(*p)).unwrap();
                }
            }
        }
        Op::Produce { source, target, rate } => {
            let acc = format!("{}-accumulator", m.name);
            writeln!(
                o,
                "  ask {} [ set {acc} {acc} + {} * seconds-per-tick * rate-scale ]",
                names.agents(*source),
                num(*rate)
            )
            .unwrap();
            match target {
                Population::Pool(p) => {
                    let pool = names.pool_var(*p);
                    writeln!(o, "  set {pool} {pool} + {acc}").unwrap();
                    writeln!(o, "  set {acc} 0").unwrap();
                }
                Population::Breed(t) => {
                    let mass = names.breed_var(*t, "body_mass");
                    writeln!(o, "  let spawn floor ({acc} / {mass})").unwrap();
                    writeln!(o, "  set spawn min (list spawn (max-agents - count turtles))").unwrap();
                    writeln!(
                        o,
                        "  create-{} spawn [ init-{} setxy random-xcor random-ycor ]",
                        names.agents(*t),
                        names.agent(*t)
                    )
                    .unwrap();
                    writeln!(o, "  set {acc} {acc} - spawn * {mass}").unwrap();
                }
            }
        }
        Op::AbioticReplenish { pool, .. } => {
            let var = names.pool_var(*pool);
            let minimum = names.program.pools[*pool].minimum_amount;
            writeln!(
                o,
                "  if {var} < {m} [ set {var} {var} + replenish-fraction * ({m} - {var}) ]",
                m = num(minimum)
            )
            .unwrap();
        }
    }
}
