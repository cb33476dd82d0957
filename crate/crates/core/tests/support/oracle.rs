//! Brute-force reference trace for tiny worlds.
//!
//! Works from the conceptual model directly, with no compiler or engine
//! code involved. Restricted to what can be traced by hand: biotic
//! components only, every probability 0 or 1, no movement, no minimum
//! population, no produces or affects.

use ecoloom::model::{ComponentParams, ConceptualModel, Interaction};

#[derive(Debug, Clone, PartialEq)]
pub struct TraceAgent {
    pub id: u64,
    pub breed: usize,
    pub x: f64,
    pub y: f64,
    pub age: u32,
    pub biomass: f64,
    pub alive: bool,
}

#[derive(Debug, Clone)]
struct Species {
    photosynthesis: f64,
    respiration: f64,
    efficiency: f64,
    lifespan: u32,
    maturity: u32,
    interval: u32,
    offspring: u32,
    start_mass: f64,
}

#[derive(Debug, Clone)]
enum Rule {
    Eat {
        from: usize,
        to: usize,
        always: bool,
        rate: f64,
    },
    Wreck {
        from: usize,
        to: usize,
        always: bool,
        rate: f64,
    },
}

pub struct Oracle {
    side: f64,
    seconds: f64,
    radius: f64,
    species: Vec<Species>,
    rules: Vec<Rule>,
    pub agents: Vec<TraceAgent>,
    next_id: u64,
}

fn must(v: Option<f64>, what: &str) -> f64 {
    v.unwrap_or_else(|| panic!("oracle scenario must set {what}"))
}

fn must_n(v: Option<u32>, what: &str) -> u32 {
    v.unwrap_or_else(|| panic!("oracle scenario must set {what}"))
}

fn certain(p: f64) -> bool {
    assert!(p == 0.0 || p == 1.0, "oracle handles probabilities 0 and 1 only");
    p == 1.0
}

impl Oracle {
    /// `seconds` is the per-tick multiplier for per-second rates.
    pub fn new(model: &ConceptualModel, side: f64, seconds: f64, radius: f64) -> Self {
        let mut species = Vec::new();
        for c in &model.components {
            let ComponentParams::Biotic(p) = &c.params else {
                panic!("oracle handles biotic components only");
            };
            assert_eq!(p.move_velocity.unwrap_or(0.0), 0.0, "oracle agents stand still");
            assert_eq!(p.minimum_population.unwrap_or(0), 0, "oracle has no population floor");
            let carbon = p.carbon_biomass.unwrap_or(0.0);
            species.push(Species {
                photosynthesis: must(p.photosynthesis_rate, "photosynthesis_rate"),
                respiration: must(p.respiratory_rate, "respiratory_rate"),
                efficiency: must(p.assimilation_efficiency, "assimilation_efficiency"),
                lifespan: must_n(p.lifespan, "lifespan"),
                maturity: must_n(p.reproductive_maturity, "reproductive_maturity"),
                interval: must_n(p.reproductive_interval, "reproductive_interval"),
                offspring: must_n(p.offspring_count, "offspring_count"),
                start_mass: if carbon > 0.0 {
                    carbon
                } else {
                    must(p.body_mass, "body_mass")
                },
            });
        }
        let index = |id: &str| model.components.iter().position(|c| c.id == id).unwrap();
        let rules = model
            .relationships
            .iter()
            .map(|r| {
                let (from, to) = (index(&r.source), index(&r.target));
                match r.interaction {
                    Interaction::Consumes {
                        interaction_probability,
                        consumption_rate,
                    } => Rule::Eat {
                        from,
                        to,
                        always: certain(must(interaction_probability, "interaction_probability")),
                        rate: must(consumption_rate, "consumption_rate"),
                    },
                    Interaction::Destroys {
                        interaction_probability,
                        destruction_rate,
                    } => Rule::Wreck {
                        from,
                        to,
                        always: certain(must(interaction_probability, "interaction_probability")),
                        rate: must(destruction_rate, "destruction_rate"),
                    },
                    _ => panic!("oracle handles consumes and destroys only"),
                }
            })
            .collect();
        Self {
            side,
            seconds,
            radius,
            species,
            rules,
            agents: Vec::new(),
            next_id: 0,
        }
    }

    pub fn place(&mut self, breed: usize, x: f64, y: f64) -> u64 {
        let id = self.next_id;
        self.next_id += 1;
        self.agents.push(TraceAgent {
            id,
            breed,
            x,
            y,
            age: 0,
            biomass: self.species[breed].start_mass,
            alive: true,
        });
        id
    }

    pub fn count(&self, breed: usize) -> usize {
        self.agents.iter().filter(|a| a.alive && a.breed == breed).count()
    }

    fn distance(&self, a: &TraceAgent, b: &TraceAgent) -> f64 {
        let dx = (a.x - b.x).abs();
        let dy = (a.y - b.y).abs();
        let dx = dx.min(self.side - dx);
        let dy = dy.min(self.side - dy);
        (dx * dx + dy * dy).sqrt()
    }

    fn closest(&self, hunter: usize, breed: usize) -> Option<usize> {
        let mut best: Option<usize> = None;
        for (j, t) in self.agents.iter().enumerate() {
            if j == hunter || !t.alive || t.breed != breed {
                continue;
            }
            let d = self.distance(&self.agents[hunter], t);
            if d > self.radius {
                continue;
            }
            best = match best {
                Some(b) if self.distance(&self.agents[hunter], &self.agents[b]) <= d => Some(b),
                _ => Some(j),
            };
        }
        best
    }

    fn roster(&self, breed: usize) -> Vec<usize> {
        (0..self.agents.len())
            .filter(|&i| self.agents[i].alive && self.agents[i].breed == breed)
            .collect()
    }

    pub fn step(&mut self) {
        for breed in 0..self.species.len() {
            let s = self.species[breed].clone();
            if s.lifespan > 0 {
                for i in self.roster(breed) {
                    if self.agents[i].age >= s.lifespan {
                        self.agents[i].alive = false;
                    }
                }
            }
            for i in self.roster(breed) {
                self.agents[i].biomass += (s.photosynthesis - s.respiration) * self.seconds;
                if self.agents[i].biomass <= 0.0 {
                    self.agents[i].alive = false;
                }
            }
            if s.offspring > 0 && s.interval > 0 {
                for i in self.roster(breed) {
                    let age = self.agents[i].age;
                    if age >= s.maturity && (age - s.maturity) % s.interval == 0 {
                        let (x, y) = (self.agents[i].x, self.agents[i].y);
                        for _ in 0..s.offspring {
                            self.place(breed, x, y);
                        }
                    }
                }
            }
        }
        for rule in self.rules.clone() {
            let (from, to, always, rate, eats) = match rule {
                Rule::Eat { from, to, always, rate } => (from, to, always, rate, true),
                Rule::Wreck { from, to, always, rate } => (from, to, always, rate, false),
            };
            for i in self.roster(from) {
                if !self.agents[i].alive {
                    continue;
                }
                let Some(j) = self.closest(i, to) else { continue };
                if !always {
                    continue;
                }
                let bite = rate * self.agents[j].biomass;
                self.agents[j].biomass -= bite;
                if eats {
                    self.agents[i].biomass += bite * self.species[from].efficiency;
                }
                if self.agents[j].biomass <= 0.0 || (!eats && rate >= 1.0) {
                    self.agents[j].alive = false;
                }
            }
        }
        self.agents.retain(|a| a.alive);
        for a in &mut self.agents {
            a.age += 1;
        }
    }
}
