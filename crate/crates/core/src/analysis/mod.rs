//! Error norms, energy audits and convergence orders.

mod energy;
mod eoc;
mod norms;

pub use energy::{energy_audit, postprocessed_energy_audit, EnergyAudit, EnergyRow};
pub use eoc::{eoc, eoc_optional, ConvergenceReport};
pub use norms::{jump_error_sum, q_norm_error, sup_m0_error, weighted_l2_error, ErrorReport, NormEvaluator};
