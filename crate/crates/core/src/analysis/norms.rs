//! Space-time error norms between [`TimeField`]s.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::evolution::{DiscreteSolution, ExactSolution, Snapshot, TimeField};
use crate::fem::{CompositeSpace, CsrMatrix, Indicator, PointValue, SpaceSampler};
use crate::poly::gauss_legendre_unit;
use crate::quadrature::{map_to_slab, RuleCache};

/// Evaluates `‖a − b‖²_H` (the `L²(Ω)` norm over all components) for pairs of
/// snapshots, optionally restricted to the support of `M0`.
pub struct NormEvaluator {
    space: CompositeSpace,
    samplers: Vec<SpaceSampler>,
    m0: Vec<Indicator>,
    exact: Option<Arc<dyn ExactSolution>>,
}

impl std::fmt::Debug for NormEvaluator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("NormEvaluator").field("n_dofs", &self.space.n_dofs()).finish_non_exhaustive()
    }
}

impl NormEvaluator {
    /// `order` is the polynomial exactness of the cell quadrature.
    pub fn new(
        space: CompositeSpace,
        m0: Vec<Indicator>,
        exact: Option<Arc<dyn ExactSolution>>,
        order: usize,
    ) -> Self {
        let samplers = space.components().iter().map(|c| SpaceSampler::new(c, order)).collect();
        Self { space, samplers, m0, exact }
    }

    pub fn space(&self) -> &CompositeSpace {
        &self.space
    }

    fn component_values(&self, c: usize, cell: usize, snap: &Snapshot) -> Vec<[f64; 2]> {
        let sampler = &self.samplers[c];
        match snap {
            Snapshot::Coeffs(v) => {
                let part = &v[self.space.offset(c)..self.space.offset(c + 1)];
                sampler
                    .cell_field(self.space.component(c), part, cell)
                    .into_iter()
                    .map(|p: PointValue| p.value)
                    .collect()
            }
            Snapshot::Exact { t, factor } => {
                let exact = self.exact.as_ref().expect("exact snapshot requires an exact solution");
                let hint = sampler.hint(cell);
                sampler
                    .cell_points(cell)
                    .iter()
                    .map(|&x| {
                        let v = exact.value(c, *t, x, hint);
                        [factor * v[0], factor * v[1]]
                    })
                    .collect()
            }
        }
    }

    /// `‖a − b‖²_H`, or `‖M0^{1/2}(a − b)‖²_H` if `restrict_m0`.
    pub fn distance_sq(&self, a: &Snapshot, b: &Snapshot, restrict_m0: bool) -> f64 {
        // combine two coefficient snapshots first: one field evaluation
        let (a, b) = match (a, b) {
            (Snapshot::Coeffs(x), Snapshot::Coeffs(y)) => {
                let d: Vec<f64> = x.iter().zip(y).map(|(p, q)| p - q).collect();
                (Snapshot::Coeffs(d), None)
            }
            _ => (a.clone(), Some(b.clone())),
        };
        let mut total = 0.0;
        for (c, sampler) in self.samplers.iter().enumerate() {
            let per_cell: Vec<f64> = (0..sampler.n_cells())
                .into_par_iter()
                .map(|cell| {
                    let chi = if restrict_m0 { self.m0[c].value(sampler.tag(cell)) } else { 1.0 };
                    if chi == 0.0 {
                        return 0.0;
                    }
                    let va = self.component_values(c, cell, &a);
                    let vb = b.as_ref().map(|b| self.component_values(c, cell, b));
                    let w = sampler.cell_weights(cell);
                    (0..w.len())
                        .map(|g| {
                            let (mut dx, mut dy) = (va[g][0], va[g][1]);
                            if let Some(vb) = &vb {
                                dx -= vb[g][0];
                                dy -= vb[g][1];
                            }
                            chi * w[g] * (dx * dx + dy * dy)
                        })
                        .sum()
                })
                .collect();
            total += per_cell.iter().sum::<f64>();
        }
        total
    }
}

/// `(∫_0^T ‖a − b‖²_H e^{-2ρt} dt)^{1/2}` with `n_time_pts` Gauss points per slab.
pub fn weighted_l2_error(
    eval: &NormEvaluator,
    a: &dyn TimeField,
    b: &dyn TimeField,
    rho: f64,
    n_time_pts: usize,
) -> f64 {
    let mesh = a.time_mesh();
    let (gs, gw) = gauss_legendre_unit(n_time_pts.max(1));
    let per_slab: Vec<f64> = (0..mesh.n_slabs())
        .into_par_iter()
        .map(|m| {
            let tau = mesh.tau(m);
            gs.iter()
                .zip(&gw)
                .map(|(&s, &w)| {
                    let t = mesh.time(m, s);
                    tau * w * (-2.0 * rho * t).exp() * eval.distance_sq(&a.at(m, s), &b.at(m, s), false)
                })
                .sum()
        })
        .collect();
    per_slab.iter().sum::<f64>().sqrt()
}

/// `(Σ_m Q_m{‖a − b‖²_H} e^{-2ρ t_m})^{1/2}` with the ρ-weighted Radau rule of
/// degree `q` on every slab.
pub fn q_norm_error(
    eval: &NormEvaluator,
    a: &dyn TimeField,
    b: &dyn TimeField,
    rho: f64,
    q: usize,
    cache: &RuleCache,
) -> Result<f64> {
    let mesh = a.time_mesh();
    let mut total = 0.0;
    for m in 0..mesh.n_slabs() {
        let tau = mesh.tau(m);
        let slab = map_to_slab(cache.get(q, rho * tau)?, mesh.t_left(m), tau, rho)?;
        let qm: f64 = slab
            .rule()
            .nodes()
            .par_iter()
            .zip(slab.weights())
            .map(|(&s, &w)| w * eval.distance_sq(&a.at(m, s), &b.at(m, s), false))
            .collect::<Vec<f64>>()
            .iter()
            .sum();
        total += (-2.0 * rho * mesh.t_left(m)).exp() * qm;
    }
    Ok(total.sqrt())
}

/// `sup_t e^{-ρt} ‖M0^{1/2}(a − b)(t)‖_H` (`ρ = 0`: the plain sup norm), sampled at `samples_per_slab`
/// interior points of every slab plus both one-sided endpoint limits.
pub fn sup_m0_error(
    eval: &NormEvaluator,
    a: &dyn TimeField,
    b: &dyn TimeField,
    rho: f64,
    samples_per_slab: usize,
) -> f64 {
    let mesh = a.time_mesh();
    let n = samples_per_slab;
    let samples: Vec<f64> = std::iter::once(0.0)
        .chain((1..=n).map(|j| j as f64 / (n + 1) as f64))
        .chain(std::iter::once(1.0))
        .collect();
    let pairs: Vec<(usize, f64)> =
        (0..mesh.n_slabs()).flat_map(|m| samples.iter().map(move |&s| (m, s))).collect();
    pairs
        .par_iter()
        .map(|&(m, s)| {
            let t = mesh.time(m, s);
            (-rho * t).exp() * eval.distance_sq(&a.at(m, s), &b.at(m, s), true).sqrt()
        })
        .collect::<Vec<f64>>()
        .into_iter()
        .fold(0.0, f64::max)
}

/// `Σ_m e^{-2ρ t_m} ‖M0^{1/2} ⟦U_h⟧_m‖²_H` (the exact solution has no jumps).
pub fn jump_error_sum(solution: &DiscreteSolution, m0: &CsrMatrix, rho: f64) -> f64 {
    let mesh = solution.time_mesh();
    (0..mesh.n_slabs())
        .map(|m| {
            let j = solution.jump(m);
            (-2.0 * rho * mesh.t_left(m)).exp() * m0.inner(&j, &j)
        })
        .sum()
}

/// Collected error measures of one run.
#[derive(Debug, Clone, Default, Serialize)]
pub struct ErrorReport {
    pub weighted_l2: Option<f64>,
    pub unweighted_l2: Option<f64>,
    pub q_norm: Option<f64>,
    pub sup_m0: Option<f64>,
    pub jump_sum: Option<f64>,
    pub rho: f64,
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub q: usize,
    pub variant: String,
}
