//! Reduction semantics for MBD and PEP actions, and bounded exploration.

mod explore;
mod export;
mod mi;
mod step;

pub(crate) use explore::process_actions;
pub use explore::{
    dynamic_containments, explore, explore_with, state_containments, Edge, ExploreConfig, ExploreError,
    TransitionSystem, DEFAULT_STATE_CAP,
};
pub use export::{to_dot, to_json, to_text};
pub use mi::{MembraneCapExceeded, MiKey, MiRegistry, DEFAULT_MEMBRANE_CAP};
pub use step::{absorb, step, Redex, Rule, Successors};
