//! Space-time fields addressed slab by slab, so that one-sided limits at
//! slab boundaries are well defined.

use std::sync::Arc;

use super::problem::{ExactSolution, TimeMesh};
use super::solution::DiscreteSolution;

/// A field at one instant: either a discrete coefficient vector or the exact
/// solution at time `t` multiplied by `factor`.
#[derive(Debug, Clone, PartialEq)]
pub enum Snapshot {
    Coeffs(Vec<f64>),
    Exact { t: f64, factor: f64 },
}

/// Something that can be evaluated at `t = t_m + s τ_m` on slab `m`.
pub trait TimeField: Sync {
    fn time_mesh(&self) -> &TimeMesh;
    fn at(&self, m: usize, s: f64) -> Snapshot;
}

impl TimeField for DiscreteSolution {
    fn time_mesh(&self) -> &TimeMesh {
        DiscreteSolution::time_mesh(self)
    }

    fn at(&self, m: usize, s: f64) -> Snapshot {
        Snapshot::Coeffs(self.eval(m, s))
    }
}

/// `e^{-ρt} U(t)` for the exact solution `U` (`ρ = 0` gives `U` itself).
#[derive(Clone)]
pub struct ExactField {
    pub exact: Arc<dyn ExactSolution>,
    mesh: TimeMesh,
    rho: f64,
}

impl ExactField {
    pub fn new(exact: Arc<dyn ExactSolution>, mesh: TimeMesh, rho: f64) -> Self {
        Self { exact, mesh, rho }
    }
}

impl TimeField for ExactField {
    fn time_mesh(&self) -> &TimeMesh {
        &self.mesh
    }

    fn at(&self, m: usize, s: f64) -> Snapshot {
        let t = self.mesh.time(m, s);
        Snapshot::Exact { t, factor: (-self.rho * t).exp() }
    }
}

/// The lift `E_ρ W(t) = e^{ρt} W(t)` of a discrete field. Not piecewise
/// polynomial in time.
pub struct Lifted<'a> {
    inner: &'a dyn TimeField,
    rho: f64,
}

/// `t ↦ e^{ρt} V(t)`.
pub fn lift_exponential(inner: &dyn TimeField, rho: f64) -> Lifted<'_> {
    Lifted { inner, rho }
}

impl TimeField for Lifted<'_> {
    fn time_mesh(&self) -> &TimeMesh {
        self.inner.time_mesh()
    }

    fn at(&self, m: usize, s: f64) -> Snapshot {
        let t = self.time_mesh().time(m, s);
        let scale = (self.rho * t).exp();
        match self.inner.at(m, s) {
            Snapshot::Coeffs(mut c) => {
                c.iter_mut().for_each(|v| *v *= scale);
                Snapshot::Coeffs(c)
            }
            Snapshot::Exact { t, factor } => Snapshot::Exact { t, factor: factor * scale },
        }
    }
}
