//! Evolutionary problems and their dG(q) time discretization.

mod dg;
mod field;
mod problem;
mod solution;
mod stages;

pub use dg::{march, march_with_cache, solve_slab, variant_operator, variant_sigma, SlabOperator};
pub use field::{lift_exponential, ExactField, Lifted, Snapshot, TimeField};
pub use problem::{EvolutionaryProblem, ExactSolution, RhsFn, TimeMesh, Variant};
pub use solution::DiscreteSolution;
pub use stages::field_classes;
