use super::config::EngineConfig;
use super::ops;
use super::world::{init_world, EngineError, WorldState};
use crate::compiler::{Population, SimProgram};
use serde::{Deserialize, Serialize};

/// Population levels after a tick, one entry per component in declaration
/// order. Biotic entries count live agents (or m² units); abiotic entries
/// are pool amounts in kg.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PopulationRecord {
    pub tick: u32,
    pub counts: Vec<f64>,
}

impl PopulationRecord {
    pub fn of(world: &WorldState, program: &SimProgram) -> Self {
        let counts = program
            .populations
            .iter()
            .map(|p| match p.population {
                Population::Breed(b) => world.breed_count(b) as f64,
                Population::Pool(i) => world.pool_amount(i).unwrap_or(0.0),
            })
            .collect();
        Self {
            tick: world.tick(),
            counts,
        }
    }
}

/// Runs one tick: every scheduled method in order, then dead agents are
/// removed, survivors age by one tick and the clock advances.
pub fn tick(world: &mut WorldState, program: &SimProgram) -> PopulationRecord {
    for b in 0..world.boost.len() {
        world.boost[b] = world.pending_boost[b];
        world.pending_boost[b] = 1.0;
    }
    for m in 0..program.methods.len() {
        ops::apply(world, program, m);
    }
    world.sweep();
    for a in &mut world.agents {
        a.age += 1;
    }
    world.tick += 1;
    PopulationRecord::of(world, program)
}

/// A run in progress. Iterating yields the tick-0 record first, then one
/// record per tick until `max_ticks`; each record is produced before the
/// next tick is computed.
#[derive(Debug, Clone)]
pub struct Simulation {
    program: SimProgram,
    world: WorldState,
    started: bool,
}

impl Simulation {
    pub fn new(program: SimProgram, config: &EngineConfig) -> Result<Self, EngineError> {
        let world = init_world(&program, config)?;
        Ok(Self {
            program,
            world,
            started: false,
        })
    }

    pub fn world(&self) -> &WorldState {
        &self.world
    }

    pub fn program(&self) -> &SimProgram {
        &self.program
    }

    pub fn is_finished(&self) -> bool {
        self.started && self.world.tick() >= self.world.config().max_ticks
    }
}

impl Iterator for Simulation {
    type Item = PopulationRecord;

    fn next(&mut self) -> Option<PopulationRecord> {
        if !self.started {
            self.started = true;
            return Some(PopulationRecord::of(&self.world, &self.program));
        }
        if self.world.tick() >= self.world.config().max_ticks {
            return None;
        }
        Some(tick(&mut self.world, &self.program))
    }
}

/// Column names plus the records of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    pub names: Vec<String>,
    pub records: Vec<PopulationRecord>,
}

impl TimeSeries {
    pub fn new(names: Vec<String>) -> Self {
        Self {
            names,
            records: Vec::new(),
        }
    }

    /// Values of one column across all records.
    pub fn series(&self, column: usize) -> Vec<f64> {
        self.records.iter().map(|r| r.counts[column]).collect()
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        self.names.iter().position(|n| n == name).map(|c| self.series(c))
    }
}

/// Runs `program` from tick 0 through `config.max_ticks`.
pub fn run(program: &SimProgram, config: &EngineConfig) -> Result<TimeSeries, EngineError> {
    run_with(program, config, |_| {})
}

/// Like [`run`], calling `on_record` with each record as soon as it exists.
pub fn run_with(
    program: &SimProgram,
    config: &EngineConfig,
    mut on_record: impl FnMut(&PopulationRecord),
) -> Result<TimeSeries, EngineError> {
    let sim = Simulation::new(program.clone(), config)?;
    let mut series = TimeSeries::new(program.population_names().into_iter().map(String::from).collect());
    for record in sim {
        on_record(&record);
        series.records.push(record);
    }
    Ok(series)
}
