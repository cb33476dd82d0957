//! Lowering of conceptual models into [`SimProgram`]s, plus the NetLogo
//! text backend.

mod ir;
mod lower;
mod netlogo;

pub use ir::{
    BreedDef, BreedParams, MethodDef, MethodKind, NoOp, Op, Origin, PoolDef, Population, PopulationRef, SimProgram,
};
pub use lower::{compile, procedure_slug, CompileError};
pub use netlogo::{emit_netlogo, emit_netlogo_with};
