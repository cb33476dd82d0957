//! Per-method semantics. Each function walks live agents in ascending id
//! order; agents spawned by a method are not visited by that same method.

use super::world::{SpatialIndex, WorldState};
use crate::compiler::{Op, Population, SimProgram};

const WHOLE_TOLERANCE: f64 = 1e-9;

pub(crate) fn apply(world: &mut WorldState, program: &SimProgram, method: usize) {
    match program.methods[method].op {
        Op::Lifespan { breed, limit } => lifespan(world, breed, limit),
        Op::MinimumPopulation { breed, minimum } => min_population(world, program, breed, minimum),
        Op::Biomass {
            breed,
            photosynthesis_rate,
            respiratory_rate,
        } => biomass(world, breed, photosynthesis_rate - respiratory_rate),
        Op::Reproduction {
            breed,
            maturity,
            interval,
            offspring,
        } => reproduce(world, program, breed, maturity, interval, offspring),
        Op::Movement {
            breed,
            direction,
            velocity,
        } => movement(world, breed, direction, velocity),
        Op::Consume {
            source,
            target,
            probability,
            rate,
        } => {
            let efficiency = program.breeds[source].params.assimilation_efficiency;
            consume(world, source, target, probability, rate, efficiency)
        }
        Op::Destroy {
            source,
            target,
            probability,
            rate,
        } => destroy(world, source, target, probability, rate),
        Op::Affect {
            source,
            target,
            probability,
            growth_rate,
        } => affect(world, source, target, probability, growth_rate),
        Op::Produce { source, target, rate } => produce(world, program, method, source, target, rate),
        Op::AbioticReplenish { pool, minimum } => replenish(world, pool, minimum),
    }
}

/// Indices of live agents of `breed` at the moment the method starts.
fn members(world: &WorldState, breed: usize) -> Vec<usize> {
    world
        .agents
        .iter()
        .enumerate()
        .filter(|(_, a)| a.alive && a.breed == breed)
        .map(|(i, _)| i)
        .collect()
}

pub(crate) fn lifespan(world: &mut WorldState, breed: usize, limit: u32) {
    if limit == 0 {
        return;
    }
    for i in members(world, breed) {
        if world.agents[i].age >= limit {
            world.kill(i);
        }
    }
}

pub(crate) fn min_population(world: &mut WorldState, program: &SimProgram, breed: usize, minimum: u32) {
    let count = world.breed_count(breed);
    let minimum = minimum as usize;
    if count >= minimum {
        return;
    }
    let deficit = (minimum - count) as f64;
    let base = (world.config.replenish_fraction * deficit).ceil();
    let spawn = (base * world.boost[breed]).floor().max(0.0) as usize;
    let biomass = program.breeds[breed].params.initial_biomass();
    for _ in 0..spawn.min(world.room()) {
        world.spawn_random(breed, biomass);
    }
}

pub(crate) fn biomass(world: &mut WorldState, breed: usize, net_rate: f64) {
    let delta = net_rate * world.config.per_tick();
    for i in members(world, breed) {
        world.agents[i].carbon_biomass += delta;
        if world.agents[i].carbon_biomass <= 0.0 {
            world.kill(i);
        }
    }
}

pub(crate) fn reproduce(
    world: &mut WorldState,
    program: &SimProgram,
    breed: usize,
    maturity: u32,
    interval: u32,
    offspring: u32,
) {
    if interval == 0 || offspring == 0 {
        return;
    }
    let boost = world.boost[breed];
    let biomass = program.breeds[breed].params.initial_biomass();
    // fractional offspring from a growth boost carry over to the next parent
    let mut carry = 0.0;
    for i in members(world, breed) {
        let age = world.agents[i].age;
        if age < maturity || (age - maturity) % interval != 0 {
            continue;
        }
        let wanted = f64::from(offspring) * boost + carry;
        let count = wanted.floor().max(0.0);
        carry = wanted - count;
        let (x, y) = (world.agents[i].x, world.agents[i].y);
        for _ in 0..count as usize {
            if world.room() == 0 {
                return;
            }
            let heading = world.rng.uniform() * 360.0;
            world.push_agent(breed, x, y, heading, biomass);
        }
    }
}

pub(crate) fn movement(world: &mut WorldState, breed: usize, direction: f64, velocity: f64) {
    let n = f64::from(world.config.grid_size);
    let step = (velocity * world.config.seconds_per_tick / world.config.meters_per_cell).min(n);
    let wiggle = world.config.wiggle_degrees;
    for i in members(world, breed) {
        let jitter = (world.rng.uniform() * 2.0 - 1.0) * wiggle;
        let heading = (direction + jitter).rem_euclid(360.0);
        let rad = heading.to_radians();
        let (x, y) = (
            world.agents[i].x + step * rad.sin(),
            world.agents[i].y + step * rad.cos(),
        );
        let (x, y) = (world.wrap(x), world.wrap(y));
        let agent = &mut world.agents[i];
        agent.heading = heading;
        agent.x = x;
        agent.y = y;
    }
}

pub(crate) fn consume(
    world: &mut WorldState,
    source: usize,
    target: usize,
    probability: f64,
    rate: f64,
    efficiency: f64,
) {
    let index = SpatialIndex::build(world, target);
    let radius = world.config.interaction_radius;
    for i in members(world, source) {
        if !world.agents[i].alive {
            continue;
        }
        let (x, y) = (world.agents[i].x, world.agents[i].y);
        let Some(t) = index.nearest(world, x, y, radius, i) else {
            continue;
        };
        if world.rng.uniform() >= probability {
            continue;
        }
        let taken = rate * world.agents[t].carbon_biomass;
        world.agents[t].carbon_biomass -= taken;
        world.agents[i].carbon_biomass += taken * efficiency;
        if world.agents[t].carbon_biomass <= 0.0 {
            world.kill(t);
        }
    }
}

pub(crate) fn destroy(world: &mut WorldState, source: usize, target: Population, probability: f64, rate: f64) {
    match target {
        Population::Breed(target) => {
            let index = SpatialIndex::build(world, target);
            let radius = world.config.interaction_radius;
            for i in members(world, source) {
                if !world.agents[i].alive {
                    continue;
                }
                let (x, y) = (world.agents[i].x, world.agents[i].y);
                let Some(t) = index.nearest(world, x, y, radius, i) else {
                    continue;
                };
                if world.rng.uniform() >= probability {
                    continue;
                }
                let victim = &mut world.agents[t];
                victim.carbon_biomass -= rate * victim.carbon_biomass;
                let gone = rate >= 1.0 || victim.carbon_biomass <= 0.0;
                if gone {
                    world.kill(t);
                }
            }
        }
        Population::Pool(pool) => {
            for _ in members(world, source) {
                if world.pools[pool] <= 0.0 {
                    break;
                }
                if world.rng.uniform() < probability {
                    world.pools[pool] = (world.pools[pool] * (1.0 - rate)).max(0.0);
                }
            }
        }
    }
}

/// One successful draw per relationship per tick applies the effect; later
/// source agents stop drawing.
pub(crate) fn affect(
    world: &mut WorldState,
    source: Population,
    target: Population,
    probability: f64,
    growth_rate: f64,
) {
    let applied = match source {
        Population::Pool(pool) => world.pools[pool] > 0.0 && world.rng.uniform() < probability,
        Population::Breed(source) => {
            let index = match target {
                Population::Breed(t) => Some(SpatialIndex::build(world, t)),
                Population::Pool(_) => None,
            };
            let radius = world.config.interaction_radius;
            let mut applied = false;
            for i in members(world, source) {
                if !world.agents[i].alive {
                    continue;
                }
                if let Some(index) = &index {
                    let (x, y) = (world.agents[i].x, world.agents[i].y);
                    if index.nearest(world, x, y, radius, i).is_none() {
                        continue;
                    }
                }
                if world.rng.uniform() < probability {
                    applied = true;
                    break;
                }
            }
            applied
        }
    };
    if !applied {
        return;
    }
    match target {
        Population::Breed(t) => world.pending_boost[t] *= 1.0 + growth_rate,
        Population::Pool(p) => world.pools[p] = (world.pools[p] * (1.0 + growth_rate)).max(0.0),
    }
}

pub(crate) fn produce(
    world: &mut WorldState,
    program: &SimProgram,
    method: usize,
    source: usize,
    target: Population,
    rate: f64,
) {
    let per_agent = rate * world.config.per_tick();
    let producers = world.breed_count(source) as f64;
    world.accumulators[method] += producers * per_agent;
    match target {
        Population::Pool(pool) => {
            world.pools[pool] += world.accumulators[method];
            world.accumulators[method] = 0.0;
        }
        Population::Breed(t) => {
            let mass = program.breeds[t].params.body_mass;
            // rates scaled to exactly one body mass per tick land a hair short
            let wanted = (world.accumulators[method] / mass + WHOLE_TOLERANCE).floor() as usize;
            let spawned = wanted.min(world.room());
            let biomass = program.breeds[t].params.initial_biomass();
            for _ in 0..spawned {
                world.spawn_random(t, biomass);
            }
            world.accumulators[method] = (world.accumulators[method] - spawned as f64 * mass).max(0.0);
        }
    }
}

pub(crate) fn replenish(world: &mut WorldState, pool: usize, minimum: f64) {
    let amount = world.pools[pool];
    if amount < minimum {
        world.pools[pool] = amount + world.config.replenish_fraction * (minimum - amount);
    }
}
