use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Seconds in a tick: one month of 30 days.
pub const SECONDS_PER_MONTH: f64 = 30.0 * 24.0 * 60.0 * 60.0;

/// Engine settings. Missing keys in a config file take the defaults below.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EngineConfig {
    /// Cells per side of the square toroidal world.
    pub grid_size: u32,
    /// Hard ceiling on live agents; spawning stops silently when reached.
    pub max_agents: usize,
    pub seconds_per_tick: f64,
    pub meters_per_cell: f64,
    /// Normalizes per-second rates (biomass, production) to a tick.
    pub rate_scale: f64,
    /// Euclidean torus distance, in cells, within which agents interact.
    pub interaction_radius: f64,
    /// Movement heading jitter, +/- degrees around the breed direction.
    pub wiggle_degrees: f64,
    /// Fraction of a minimum-population or minimum-amount deficit restored
    /// per tick.
    pub replenish_fraction: f64,
    pub max_ticks: u32,
    pub rng_seed: u64,
}

impl Default for EngineConfig {
    fn default() -> Self {
        Self {
            grid_size: 32,
            max_agents: 25_000,
            seconds_per_tick: SECONDS_PER_MONTH,
            meters_per_cell: 1.0,
            rate_scale: 1.0,
            interaction_radius: 1.0,
            wiggle_degrees: 45.0,
            replenish_fraction: 0.25,
            max_ticks: 120,
            rng_seed: 0,
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("grid_size must be at least 1")]
    GridSize,
    #[error("max_agents must be at least 1")]
    MaxAgents,
    #[error("{0} must be a finite, non-negative number")]
    NegativeRate(&'static str),
    #[error("meters_per_cell must be positive")]
    MetersPerCell,
    #[error("replenish_fraction must lie in [0, 1]")]
    ReplenishFraction,
}

impl EngineConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.rng_seed = seed;
        self
    }

    pub fn with_ticks(mut self, ticks: u32) -> Self {
        self.max_ticks = ticks;
        self
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.grid_size == 0 {
            return Err(ConfigError::GridSize);
        }
        if self.max_agents == 0 {
            return Err(ConfigError::MaxAgents);
        }
        for (name, v) in [
            ("seconds_per_tick", self.seconds_per_tick),
            ("rate_scale", self.rate_scale),
            ("interaction_radius", self.interaction_radius),
            ("wiggle_degrees", self.wiggle_degrees),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(ConfigError::NegativeRate(name));
            }
        }
        if !(self.meters_per_cell.is_finite() && self.meters_per_cell > 0.0) {
            return Err(ConfigError::MetersPerCell);
        }
        if !(0.0..=1.0).contains(&self.replenish_fraction) {
            return Err(ConfigError::ReplenishFraction);
        }
        Ok(())
    }

    /// Multiplier turning a per-second rate into a per-tick amount.
    pub fn per_tick(&self) -> f64 {
        self.seconds_per_tick * self.rate_scale
    }
}
