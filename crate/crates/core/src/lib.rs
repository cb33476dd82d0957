//! Conceptual food-web models, their compilation to agent-based simulation
//! programs, and a deterministic engine that runs them.

pub mod compiler;
pub mod engine;
pub mod exemplars;
pub mod export;
pub mod model;
