//! Simulation runs executed off the async runtime, with their records
//! published as they are produced.

use ecoloom::compiler::SimProgram;
use ecoloom::engine::{EngineConfig, PopulationRecord, Simulation, TimeSeries};
use serde::Serialize;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, RwLock};
use tokio::sync::watch;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RunStatus {
    Pending,
    Running,
    Done,
    Failed,
}

impl RunStatus {
    pub fn is_final(self) -> bool {
        matches!(self, RunStatus::Done | RunStatus::Failed)
    }
}

#[derive(Debug)]
struct RunState {
    status: RunStatus,
    records: Vec<PopulationRecord>,
    error: Option<String>,
}

/// One run. Owns its engine exclusively; observers only read records.
#[derive(Debug)]
pub struct RunSession {
    pub id: String,
    pub model_id: String,
    pub config: EngineConfig,
    pub names: Vec<String>,
    state: Mutex<RunState>,
    // bumped after every change to `state`
    version: watch::Sender<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunSummary {
    pub id: String,
    pub model_id: String,
    pub status: RunStatus,
    pub records: usize,
    pub populations: Vec<String>,
    pub config: EngineConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Records from `from` onward plus the status they were read under.
pub struct Snapshot {
    pub records: Vec<PopulationRecord>,
    pub status: RunStatus,
    pub error: Option<String>,
}

impl RunSession {
    pub fn new(id: String, model_id: String, config: EngineConfig, program: &SimProgram) -> Self {
        Self {
            id,
            model_id,
            config,
            names: program.population_names().into_iter().map(String::from).collect(),
            state: Mutex::new(RunState {
                status: RunStatus::Pending,
                records: Vec::new(),
                error: None,
            }),
            version: watch::channel(0).0,
        }
    }

    fn update(&self, f: impl FnOnce(&mut RunState)) {
        {
            let mut state = self.state.lock().unwrap();
            f(&mut state);
        }
        self.version.send_modify(|v| *v += 1);
    }

    fn advance(&self, to: RunStatus) {
        self.update(|s| {
            if !s.status.is_final() {
                s.status = to;
            }
        });
    }

    /// Runs the engine to completion on the calling thread.
    pub fn execute(&self, program: SimProgram) {
        self.advance(RunStatus::Running);
        let sim = match Simulation::new(program, &self.config) {
            Ok(sim) => sim,
            Err(e) => {
                self.update(|s| {
                    s.status = RunStatus::Failed;
                    s.error = Some(e.to_string());
                });
                return;
            }
        };
        for record in sim {
            self.update(|s| s.records.push(record));
        }
        self.advance(RunStatus::Done);
    }

    pub fn subscribe(&self) -> watch::Receiver<u64> {
        self.version.subscribe()
    }

    pub fn snapshot(&self, from: usize) -> Snapshot {
        let state = self.state.lock().unwrap();
        Snapshot {
            records: state.records.get(from..).unwrap_or_default().to_vec(),
            status: state.status,
            error: state.error.clone(),
        }
    }

    pub fn summary(&self) -> RunSummary {
        let state = self.state.lock().unwrap();
        RunSummary {
            id: self.id.clone(),
            model_id: self.model_id.clone(),
            status: state.status,
            records: state.records.len(),
            populations: self.names.clone(),
            config: self.config.clone(),
            error: state.error.clone(),
        }
    }

    /// The full series once the run is done.
    pub fn series(&self) -> Option<TimeSeries> {
        let state = self.state.lock().unwrap();
        (state.status == RunStatus::Done).then(|| TimeSeries {
            names: self.names.clone(),
            records: state.records.clone(),
        })
    }
}

#[derive(Debug, Default)]
pub struct RunRegistry {
    runs: RwLock<HashMap<String, Arc<RunSession>>>,
}

impl RunRegistry {
    pub fn insert(&self, session: Arc<RunSession>) {
        self.runs.write().unwrap().insert(session.id.clone(), session);
    }

    pub fn get(&self, id: &str) -> Option<Arc<RunSession>> {
        self.runs.read().unwrap().get(id).cloned()
    }

    pub fn list(&self) -> Vec<RunSummary> {
        let mut all: Vec<_> = self.runs.read().unwrap().values().map(|s| s.summary()).collect();
        all.sort_by(|a, b| a.id.cmp(&b.id));
        all
    }
}
