//! Exponentially weighted right Gauss-Radau quadrature in time.
//!
//! A reference rule on `[0, 1]` for the weight `e^{-2σs}` is mapped onto each
//! time slab with `σ = ρτ`; for `σ = 0` the classical right Radau rule is
//! recovered.

mod cache;
mod moments;
mod radau;
mod slab;
mod theta;

pub use cache::RuleCache;
pub use moments::exp_moments;
pub use radau::{build_weighted_radau, WeightedRadauRule, MAX_DEGREE, MAX_SIGMA};
pub use slab::{map_to_slab, radau_interpolate, SlabInterpolant, SlabRule};
pub use theta::{build_theta, ThetaPoly};
