//! Contextual control flow analysis: estimates `(I, C, R)`, a validator for
//! the acceptability judgement and a saturating solver.

mod diff;
mod estimate;
mod json;
mod lineage;
mod rules;
mod solve;
mod validate;

pub use diff::{diff_estimates, EstimateDiff};
pub use estimate::{CausalRecord, Estimate, Item, Slot};
pub use json::{
    estimate_from_json, estimate_from_str, estimate_to_json, estimate_to_string, resolve_alias, EstimateFormatError,
};
pub use lineage::Lineage;
pub use rules::{enabled, Instance, Mode};
pub use solve::{solve, solve_with, SolverConfig};
pub use validate::{check_closure, judge, validate, Violation};

/// `r_blocks(est, a, b)`: the membranes at `a` and `b` can never interact.
pub fn r_blocks(est: &Estimate, a: &Slot, b: &Slot) -> bool {
    est.r_blocks(a, b)
}
