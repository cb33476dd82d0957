//! Deterministic agent-based virtual machine for compiled programs.
//!
//! One tick is one month. The world is a square torus of `grid_size`
//! cells; agents carry a continuous position, heading, age and carbon
//! biomass. All randomness comes from one ChaCha8 generator seeded from
//! `rng_seed` and is consumed in schedule order, then agent-id order, so a
//! (program, config) pair always produces the same time series.

mod config;
pub(crate) mod ops;
mod run;
mod world;

pub use config::{ConfigError, EngineConfig, SECONDS_PER_MONTH};
pub use run::{run, run_with, tick, PopulationRecord, Simulation, TimeSeries};
pub use world::{init_world, Agent, AgentId, EngineError, SimRng, WorldState};
