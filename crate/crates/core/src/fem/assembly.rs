//! Element-quadrature assembly of mass, coupling and load vectors.

use rayon::prelude::*;

use super::cell_quadrature::CellQuadrature;
use super::mesh::{Indicator, Region};
use super::space::{CompositeSpace, FeSpace, PointValue, SpaceKind};
use super::sparse::CsrMatrix;
use crate::error::{config_err, Result};

/// Physical quadrature points of every cell together with the mapped basis
/// functions of one space. Built once, reused for loads and error integrals.
#[derive(Debug, Clone)]
pub struct SpaceSampler {
    n_q: usize,
    n_local: usize,
    points: Vec<[f64; 2]>,
    weights: Vec<f64>,
    hints: Vec<[f64; 2]>,
    tags: Vec<Region>,
    basis: Vec<PointValue>,
}

impl SpaceSampler {
    /// Uses a cell rule exact for polynomials of degree `order`.
    pub fn new(space: &FeSpace, order: usize) -> Self {
        let mesh = space.mesh();
        let quad = CellQuadrature::for_dim(mesh.dim(), order);
        let tables: Vec<_> = quad.points.iter().map(|&p| space.element().eval(p)).collect();
        let n_cells = mesh.n_cells();
        let per_cell: Vec<(Vec<[f64; 2]>, Vec<f64>, Vec<PointValue>)> = (0..n_cells)
            .into_par_iter()
            .map(|cell| {
                let map = mesh.cell_map(cell);
                let pts = quad.points.iter().map(|&p| map.map(p)).collect();
                let w = quad.weights.iter().map(|w| w * map.det.abs()).collect();
                let b = tables.iter().flat_map(|t| space.map_table(cell, &map, t)).collect();
                (pts, w, b)
            })
            .collect();
        let mut s = Self {
            n_q: quad.len(),
            n_local: space.n_local(),
            points: Vec::with_capacity(n_cells * quad.len()),
            weights: Vec::with_capacity(n_cells * quad.len()),
            hints: (0..n_cells).map(|c| mesh.centroid(c)).collect(),
            tags: (0..n_cells).map(|c| mesh.tag(c)).collect(),
            basis: Vec::with_capacity(n_cells * quad.len() * space.n_local()),
        };
        for (p, w, b) in per_cell {
            s.points.extend(p);
            s.weights.extend(w);
            s.basis.extend(b);
        }
        s
    }

    pub fn n_cells(&self) -> usize {
        self.tags.len()
    }

    pub fn points_per_cell(&self) -> usize {
        self.n_q
    }

    pub fn cell_points(&self, cell: usize) -> &[[f64; 2]] {
        &self.points[cell * self.n_q..(cell + 1) * self.n_q]
    }

    pub fn cell_weights(&self, cell: usize) -> &[f64] {
        &self.weights[cell * self.n_q..(cell + 1) * self.n_q]
    }

    pub fn hint(&self, cell: usize) -> [f64; 2] {
        self.hints[cell]
    }

    pub fn tag(&self, cell: usize) -> Region {
        self.tags[cell]
    }

    /// Basis data of local function `b` at quadrature point `g` of `cell`.
    pub fn basis(&self, cell: usize, g: usize) -> &[PointValue] {
        let start = (cell * self.n_q + g) * self.n_local;
        &self.basis[start..start + self.n_local]
    }

    /// Values of the field `coeffs` at every quadrature point of `cell`.
    pub fn cell_field(&self, space: &FeSpace, coeffs: &[f64], cell: usize) -> Vec<PointValue> {
        let dofs = space.cell_dofs(cell);
        (0..self.n_q)
            .map(|g| {
                let mut out = PointValue::default();
                for (b, dof) in self.basis(cell, g).iter().zip(dofs) {
                    if let Some(d) = dof {
                        let c = coeffs[*d];
                        out.value[0] += c * b.value[0];
                        out.value[1] += c * b.value[1];
                        out.deriv[0] += c * b.deriv[0];
                        out.deriv[1] += c * b.deriv[1];
                    }
                }
                out
            })
            .collect()
    }
}

/// `∫ 1·φ_i·φ_j` for the given indicator.
pub fn assemble_weighted_mass(space: &FeSpace, indicator: Indicator) -> CsrMatrix {
    let sampler = SpaceSampler::new(space, 2 * space_degree(space) + 2);
    mass_with_sampler(space, &sampler, indicator)
}

pub(crate) fn space_degree(space: &FeSpace) -> usize {
    match space.kind() {
        SpaceKind::Lagrange { k, .. } => k,
        SpaceKind::RaviartThomas { order } => order + 1,
    }
}

fn scatter(n: usize, m: usize, locals: Vec<Vec<(usize, usize, f64)>>) -> CsrMatrix {
    let triplets: Vec<(usize, usize, f64)> = locals.into_iter().flatten().collect();
    CsrMatrix::from_triplets(n, m, &triplets)
}

pub fn mass_with_sampler(space: &FeSpace, sampler: &SpaceSampler, indicator: Indicator) -> CsrMatrix {
    let n = space.n_dofs();
    let locals: Vec<Vec<(usize, usize, f64)>> = (0..sampler.n_cells())
        .into_par_iter()
        .map(|cell| {
            let chi = indicator.value(sampler.tag(cell));
            if chi == 0.0 {
                return Vec::new();
            }
            let dofs = space.cell_dofs(cell);
            let nl = dofs.len();
            let mut local = vec![0.0; nl * nl];
            for (g, &w) in sampler.cell_weights(cell).iter().enumerate() {
                let b = sampler.basis(cell, g);
                for i in 0..nl {
                    for j in 0..nl {
                        local[i * nl + j] +=
                            chi * w * (b[i].value[0] * b[j].value[0] + b[i].value[1] * b[j].value[1]);
                    }
                }
            }
            let mut out = Vec::with_capacity(nl * nl);
            for (i, di) in dofs.iter().enumerate() {
                for (j, dj) in dofs.iter().enumerate() {
                    if let (Some(a), Some(b)) = (di, dj) {
                        out.push((*a, *b, local[i * nl + j]));
                    }
                }
            }
            out
        })
        .collect();
    scatter(n, n, locals)
}

/// `C_ij = ∫ φ_i div ψ_j` (or `∫ φ_i ψ_j'` in 1D) for `u ∈ H¹₀`-conforming
/// `u_space` and derivative-carrying `v_space`.
pub fn assemble_coupling(u_space: &FeSpace, v_space: &FeSpace) -> Result<CsrMatrix> {
    if !std::sync::Arc::ptr_eq(u_space.mesh(), v_space.mesh()) {
        return config_err("coupled spaces must share one mesh");
    }
    let dim = u_space.mesh().dim();
    match (u_space.kind(), v_space.kind(), dim) {
        (SpaceKind::Lagrange { dirichlet: true, .. }, SpaceKind::Lagrange { .. }, 1) => {}
        (SpaceKind::Lagrange { dirichlet: true, .. }, SpaceKind::RaviartThomas { .. }, 2) => {}
        (u, v, d) => return config_err(format!("non-conforming pairing {u:?} / {v:?} in {d}D")),
    }
    let order = space_degree(u_space) + space_degree(v_space) + 2;
    let su = SpaceSampler::new(u_space, order);
    let sv = SpaceSampler::new(v_space, order);
    let locals: Vec<Vec<(usize, usize, f64)>> = (0..su.n_cells())
        .into_par_iter()
        .map(|cell| {
            let du = u_space.cell_dofs(cell);
            let dv = v_space.cell_dofs(cell);
            let mut local = vec![0.0; du.len() * dv.len()];
            for (g, &w) in su.cell_weights(cell).iter().enumerate() {
                let bu = su.basis(cell, g);
                let bv = sv.basis(cell, g);
                for i in 0..du.len() {
                    for j in 0..dv.len() {
                        local[i * dv.len() + j] += w * bu[i].value[0] * bv[j].deriv[0];
                    }
                }
            }
            let mut out = Vec::new();
            for (i, di) in du.iter().enumerate() {
                for (j, dj) in dv.iter().enumerate() {
                    if let (Some(a), Some(b)) = (di, dj) {
                        out.push((*a, *b, local[i * dv.len() + j]));
                    }
                }
            }
            out
        })
        .collect();
    Ok(scatter(u_space.n_dofs(), v_space.n_dofs(), locals))
}

/// `∫ f·φ_i` with `f(x, cell_centroid)`; per-cell contributions are summed
/// in cell order.
pub fn assemble_load(
    space: &FeSpace,
    sampler: &SpaceSampler,
    f: &(dyn Fn([f64; 2], [f64; 2]) -> [f64; 2] + Sync),
) -> Vec<f64> {
    let locals: Vec<Vec<f64>> = (0..sampler.n_cells())
        .into_par_iter()
        .map(|cell| {
            let nl = space.n_local();
            let mut local = vec![0.0; nl];
            let hint = sampler.hint(cell);
            for (g, (&x, &w)) in sampler.cell_points(cell).iter().zip(sampler.cell_weights(cell)).enumerate() {
                let v = f(x, hint);
                for (l, b) in local.iter_mut().zip(sampler.basis(cell, g)) {
                    *l += w * (v[0] * b.value[0] + v[1] * b.value[1]);
                }
            }
            local
        })
        .collect();
    let mut out = vec![0.0; space.n_dofs()];
    for (cell, local) in locals.iter().enumerate() {
        for (l, dof) in local.iter().zip(space.cell_dofs(cell)) {
            if let Some(d) = dof {
                out[*d] += l;
            }
        }
    }
    out
}

/// The assembled operators `M0`, `M1` (symmetric PSD) and `A` (skew) on a
/// composite space.
#[derive(Debug, Clone)]
pub struct BlockOperator {
    pub space: CompositeSpace,
    pub m0: CsrMatrix,
    pub m1: CsrMatrix,
    pub a: CsrMatrix,
    /// Indicators defining `M0` per component (used for `M0^{1/2}` as a
    /// restriction when measuring errors).
    pub m0_indicators: Vec<Indicator>,
    pub m1_indicators: Vec<Indicator>,
}

impl BlockOperator {
    /// Two-component operator `[[0, C], [-Cᵀ, 0]]` with indicator masses.
    pub fn two_field(space: CompositeSpace, m0: [Indicator; 2], m1: [Indicator; 2]) -> Result<Self> {
        if space.components().len() != 2 {
            return config_err("two-field operator needs exactly two components");
        }
        let (u, v) = (space.component(0), space.component(1));
        let c = assemble_coupling(u, v)?;
        let neg_ct = c.transpose().scaled(-1.0);
        let sizes = space.sizes();
        let a = CsrMatrix::from_blocks(&[vec![None, Some(&c)], vec![Some(&neg_ct), None]], &sizes, &sizes);
        let mass = |ind: [Indicator; 2]| {
            let b0 = assemble_weighted_mass(u, ind[0]);
            let b1 = assemble_weighted_mass(v, ind[1]);
            CsrMatrix::from_blocks(&[vec![Some(&b0), None], vec![None, Some(&b1)]], &sizes, &sizes)
        };
        let m0_mat = mass(m0);
        let m1_mat = mass(m1);
        Ok(Self { space, m0: m0_mat, m1: m1_mat, a, m0_indicators: m0.to_vec(), m1_indicators: m1.to_vec() })
    }

    pub fn n_dofs(&self) -> usize {
        self.space.n_dofs()
    }

    /// Coercivity constant of `ρM0 + M1` for indicator coefficients that
    /// cover the domain: `min(ρ, 1)`.
    pub fn gamma(&self, rho: f64) -> f64 {
        rho.min(1.0)
    }

    /// `ρM0 + M1`.
    pub fn shifted_mass(&self, rho: f64) -> CsrMatrix {
        self.m0.linear_combination(rho, &self.m1, 1.0)
    }

    /// `max|A + Aᵀ| / max|A|`.
    pub fn skew_defect(&self) -> f64 {
        let sum = self.a.linear_combination(1.0, &self.a.transpose(), 1.0);
        let scale = self.a.max_abs();
        if scale == 0.0 {
            0.0
        } else {
            sum.max_abs() / scale
        }
    }
}
