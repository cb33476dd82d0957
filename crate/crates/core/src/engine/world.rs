use super::config::{ConfigError, EngineConfig};
use crate::compiler::SimProgram;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

pub type AgentId = u64;

#[derive(Debug, Error, PartialEq)]
pub enum EngineError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("starting populations total {requested} agents, above the {max_agents}-agent ceiling")]
    TooManyAgents { requested: usize, max_agents: usize },
    #[error("no breed with index {0}")]
    UnknownBreed(usize),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Agent {
    pub id: AgentId,
    /// Index into the program's breed table.
    pub breed: usize,
    pub x: f64,
    pub y: f64,
    /// Compass degrees, 0 = north (+y), 90 = east (+x).
    pub heading: f64,
    /// Age in ticks.
    pub age: u32,
    pub carbon_biomass: f64,
    pub alive: bool,
}

/// The single seeded generator all engine randomness comes from.
#[derive(Debug, Clone)]
pub struct SimRng(ChaCha8Rng);

impl SimRng {
    pub fn new(seed: u64) -> Self {
        Self(ChaCha8Rng::seed_from_u64(seed))
    }

    /// Uniform draw in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.0.gen::<f64>()
    }
}

/// Live simulation state. Agents are kept in ascending id order; dead
/// agents stay in place (flagged) until the end of the tick.
#[derive(Debug, Clone)]
pub struct WorldState {
    pub(crate) config: EngineConfig,
    pub(crate) tick: u32,
    pub(crate) agents: Vec<Agent>,
    pub(crate) pools: Vec<f64>,
    pub(crate) rng: SimRng,
    /// Produce accumulators, indexed like the program's method list.
    pub(crate) accumulators: Vec<f64>,
    /// Growth multipliers in force this tick, per breed.
    pub(crate) boost: Vec<f64>,
    /// Multipliers collected this tick for the next one.
    pub(crate) pending_boost: Vec<f64>,
    pub(crate) breed_live: Vec<usize>,
    pub(crate) live: usize,
    pub(crate) next_id: AgentId,
}

impl WorldState {
    pub fn config(&self) -> &EngineConfig {
        &self.config
    }

    pub fn tick(&self) -> u32 {
        self.tick
    }

    /// All agents, including ones that died during the current tick.
    pub fn agents(&self) -> &[Agent] {
        &self.agents
    }

    pub fn live_agents(&self) -> impl Iterator<Item = &Agent> {
        self.agents.iter().filter(|a| a.alive)
    }

    pub fn agent(&self, id: AgentId) -> Option<&Agent> {
        self.agents
            .binary_search_by_key(&id, |a| a.id)
            .ok()
            .map(|i| &self.agents[i])
    }

    pub fn live_count(&self) -> usize {
        self.live
    }

    pub fn breed_count(&self, breed: usize) -> usize {
        self.breed_live.get(breed).copied().unwrap_or(0)
    }

    pub fn pool_amount(&self, pool: usize) -> Option<f64> {
        self.pools.get(pool).copied()
    }

    pub fn accumulator(&self, method: usize) -> f64 {
        self.accumulators.get(method).copied().unwrap_or(0.0)
    }

    /// Number of further agents the ceiling allows.
    pub(crate) fn room(&self) -> usize {
        self.config.max_agents.saturating_sub(self.live)
    }

    pub(crate) fn wrap(&self, v: f64) -> f64 {
        let n = f64::from(self.config.grid_size);
        let w = v.rem_euclid(n);
        // rem_euclid can round up to n for tiny negative inputs
        if w >= n {
            0.0
        } else {
            w
        }
    }

    /// Appends a live agent; callers check [`Self::room`] first.
    pub(crate) fn push_agent(&mut self, breed: usize, x: f64, y: f64, heading: f64, biomass: f64) -> AgentId {
        let id = self.next_id;
        self.next_id += 1;
        let (x, y) = (self.wrap(x), self.wrap(y));
        self.agents.push(Agent {
            id,
            breed,
            x,
            y,
            heading,
            age: 0,
            carbon_biomass: biomass,
            alive: true,
        });
        self.breed_live[breed] += 1;
        self.live += 1;
        id
    }

    /// Spawns a fresh agent at a uniformly random position and heading.
    pub(crate) fn spawn_random(&mut self, breed: usize, biomass: f64) -> AgentId {
        let n = f64::from(self.config.grid_size);
        let x = self.rng.uniform() * n;
        let y = self.rng.uniform() * n;
        let heading = self.rng.uniform() * 360.0;
        self.push_agent(breed, x, y, heading, biomass)
    }

    pub(crate) fn kill(&mut self, index: usize) {
        let agent = &mut self.agents[index];
        if agent.alive {
            agent.alive = false;
            self.breed_live[agent.breed] -= 1;
            self.live -= 1;
        }
    }

    /// Places an agent of `breed` at an explicit position, with the breed's
    /// initial biomass and heading 0. Returns `None` at the agent ceiling.
    pub fn place_agent(
        &mut self,
        program: &SimProgram,
        breed: usize,
        x: f64,
        y: f64,
    ) -> Result<Option<AgentId>, EngineError> {
        let def = program.breeds.get(breed).ok_or(EngineError::UnknownBreed(breed))?;
        if self.room() == 0 {
            return Ok(None);
        }
        Ok(Some(self.push_agent(breed, x, y, 0.0, def.params.initial_biomass())))
    }

    /// Drops agents flagged dead.
    pub(crate) fn sweep(&mut self) {
        self.agents.retain(|a| a.alive);
    }

    /// Shortest distance between two points on the torus.
    pub fn torus_distance(&self, ax: f64, ay: f64, bx: f64, by: f64) -> f64 {
        let n = f64::from(self.config.grid_size);
        let mut dx = (ax - bx).abs();
        let mut dy = (ay - by).abs();
        dx = dx.min(n - dx);
        dy = dy.min(n - dy);
        (dx * dx + dy * dy).sqrt()
    }
}

/// Builds the tick-0 world: agents per breed in declaration order, each
/// drawing x, y and heading from the seeded generator.
pub fn init_world(program: &SimProgram, config: &EngineConfig) -> Result<WorldState, EngineError> {
    config.validate()?;
    let requested: usize = program
        .breeds
        .iter()
        .map(|b| b.params.starting_population as usize)
        .sum();
    if requested > config.max_agents {
        return Err(EngineError::TooManyAgents {
            requested,
            max_agents: config.max_agents,
        });
    }
    let mut world = WorldState {
        config: config.clone(),
        tick: 0,
        agents: Vec::with_capacity(requested),
        pools: program.pools.iter().map(|p| p.amount).collect(),
        rng: SimRng::new(config.rng_seed),
        accumulators: vec![0.0; program.methods.len()],
        boost: vec![1.0; program.breeds.len()],
        pending_boost: vec![1.0; program.breeds.len()],
        breed_live: vec![0; program.breeds.len()],
        live: 0,
        next_id: 0,
    };
    for (b, breed) in program.breeds.iter().enumerate() {
        for _ in 0..breed.params.starting_population {
            world.spawn_random(b, breed.params.initial_biomass());
        }
    }
    Ok(world)
}

/// Bucket grid over one breed's live agents for radius queries.
pub(crate) struct SpatialIndex {
    n: usize,
    cells: Vec<Vec<usize>>,
}

impl SpatialIndex {
    pub(crate) fn build(world: &WorldState, breed: usize) -> Self {
        let n = world.config.grid_size as usize;
        let mut cells = vec![Vec::new(); n * n];
        for (i, a) in world.agents.iter().enumerate() {
            if a.alive && a.breed == breed {
                cells[Self::cell(n, a.x, a.y)].push(i);
            }
        }
        Self { n, cells }
    }

    fn cell(n: usize, x: f64, y: f64) -> usize {
        let cx = (x as usize).min(n - 1);
        let cy = (y as usize).min(n - 1);
        cy * n + cx
    }

    /// Nearest live agent within `radius` of `(x, y)`, excluding the agent
    /// at index `exclude`; ties go to the lowest agent id.
    pub(crate) fn nearest(&self, world: &WorldState, x: f64, y: f64, radius: f64, exclude: usize) -> Option<usize> {
        let n = self.n as i64;
        let reach = radius.ceil() as i64;
        let span = 2 * reach + 1;
        let (cx, cy) = ((x as i64).min(n - 1), (y as i64).min(n - 1));
        let offsets: Vec<i64> = if span >= n {
            (0..n).collect()
        } else {
            (-reach..=reach).collect()
        };
        let mut best: Option<(f64, AgentId, usize)> = None;
        for &oy in &offsets {
            for &ox in &offsets {
                let (gx, gy) = if span >= n {
                    (ox, oy)
                } else {
                    ((cx + ox).rem_euclid(n), (cy + oy).rem_euclid(n))
                };
                for &i in &self.cells[(gy * n + gx) as usize] {
                    let a = &world.agents[i];
                    if i == exclude || !a.alive {
                        continue;
                    }
                    let d = world.torus_distance(x, y, a.x, a.y);
                    if d > radius {
                        continue;
                    }
                    let better = match best {
                        None => true,
                        Some((bd, bid, _)) => d < bd || (d == bd && a.id < bid),
                    };
                    if better {
                        best = Some((d, a.id, i));
                    }
                }
            }
        }
        best.map(|(_, _, i)| i)
    }
}
