//! Domain types shared by every decoder, the Pareto machinery, and the
//! feasibility validator.

mod instance;
mod pareto;
mod solution;

pub use instance::{Customer, Instance, ModelError, NodeId, Permutation, Point};
pub use pareto::{dominates, prune, prune_pairwise, Extension, Front, Label, Resources};
pub use solution::{validate, DecodeResult, DecodeStats, Outcome, Solution, Violation};
