//! Space-time discontinuous Galerkin discretization of linear evolutionary
//! systems `(∂t M0 + M1 + A) U = F`.

pub mod analysis;
pub mod error;
pub mod evolution;
pub mod fem;
pub mod poly;
pub mod postprocess;
pub mod problems;
pub mod quadrature;
pub mod study;

pub use analysis::{ConvergenceReport, EnergyAudit, ErrorReport, NormEvaluator};
pub use error::{Error, Result};
pub use evolution::{march, DiscreteSolution, EvolutionaryProblem, TimeMesh, Variant};
pub use postprocess::{postprocess, PostprocessedSolution};
pub use problems::{build_discrete_problem, ExampleId, ExampleSpec};
pub use quadrature::{build_weighted_radau, RuleCache, WeightedRadauRule};
pub use study::{run_energy_audit, run_study, NormKind, QSetting, StudyConfig};
