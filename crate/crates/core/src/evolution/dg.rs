//! Slab-by-slab dG(q) time stepping with Radau quadrature.
//!
//! On slab `m` with temporal Lagrange basis `ℓ_i` at the Radau nodes the
//! unknowns are the nodal vectors `U_j`, and the block system reads
//!
//! ```text
//! Σ_j [K_ij M0 + δ_ij W_i L] U_j = W_i F(t_i) + ℓ_i(t_m^+) M0 u_prev,
//! K_ij = w_i ℓ̂_j'(s_i) + ℓ̂_i(0) ℓ̂_j(0),
//! ```
//!
//! where `W_i = τ w_i` are the mapped weights. The temporal mass matrix is
//! diagonal because the rule is exact for degree `2q`.
//!
//! Two-field systems are solved stage by stage (see [`super::stages`]);
//! anything else goes through a sparse LU of the coupled system.

use faer::prelude::*;
use faer::sparse::linalg::solvers::Lu;
use faer::sparse::{SparseColMat, Triplet};
use rayon::prelude::*;

use super::problem::{EvolutionaryProblem, TimeMesh, Variant};
use super::solution::DiscreteSolution;
use super::stages::{field_classes, SplitSlab};
use crate::error::{config_err, Error, Result};
use crate::fem::CsrMatrix;
use crate::poly::LagrangeBasis;
use crate::quadrature::{map_to_slab, RuleCache, SlabRule};

enum SlabSolver {
    Coupled(Lu<usize, f64>),
    Split(SplitSlab),
}

/// Factorized slab operator, reusable while `(τ, σ)` do not change.
pub struct SlabOperator {
    key: (u64, u64),
    n: usize,
    solver: SlabSolver,
    ell0: Vec<f64>,
}

impl std::fmt::Debug for SlabOperator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SlabOperator")
            .field("n", &self.n)
            .field("split", &self.is_split())
            .field("ell0", &self.ell0)
            .finish_non_exhaustive()
    }
}

/// Spatial operator `L` of the variant: `M1 + A` or `ρM0 + M1 + A`.
pub fn variant_operator(problem: &EvolutionaryProblem, variant: Variant, rho: f64) -> CsrMatrix {
    let shift = if variant == Variant::Transformed { rho } else { 0.0 };
    problem.m0.linear_combination(shift, &problem.m1, 1.0).linear_combination(1.0, &problem.a, 1.0)
}

/// Quadrature weight exponent `σ` of a slab for the given variant.
pub fn variant_sigma(variant: Variant, rho: f64, tau: f64) -> f64 {
    match variant {
        Variant::Weighted => rho * tau,
        Variant::Transformed => 0.0,
    }
}

impl SlabOperator {
    /// `classes` is the two-colouring from [`field_classes`]; with `None`
    /// the coupled system is factorized directly.
    pub fn factorize(
        m0: &CsrMatrix,
        l: &CsrMatrix,
        classes: Option<&[bool]>,
        slab: &SlabRule,
        slab_index: usize,
    ) -> Result<Self> {
        let rule = slab.rule();
        let q = rule.degree();
        let n = m0.nrows();
        let basis = LagrangeBasis::new(rule.nodes());
        let ell0 = basis.values(0.0);
        let w = rule.weights();
        let key = (slab.tau().to_bits(), rule.sigma().to_bits());
        if let Some(classes) = classes {
            let k = nalgebra::DMatrix::from_fn(q + 1, q + 1, |i, j| {
                w[i] * basis.derivatives(rule.nodes()[i])[j] + ell0[i] * ell0[j]
            });
            if let Some(split) = SplitSlab::factorize(&k, slab.weights(), m0, l, classes) {
                return Ok(Self { key, n, solver: SlabSolver::Split(split), ell0 });
            }
        }
        let mut triplets = Vec::with_capacity((q + 1) * (q + 1) * m0.nnz() + (q + 1) * l.nnz());
        for i in 0..=q {
            let d = basis.derivatives(rule.nodes()[i]);
            for j in 0..=q {
                let k_ij = w[i] * d[j] + ell0[i] * ell0[j];
                if k_ij != 0.0 {
                    triplets.extend(m0.triplets().map(|(r, c, v)| Triplet::new(i * n + r, j * n + c, k_ij * v)));
                }
            }
            let wi = slab.weights()[i];
            triplets.extend(l.triplets().map(|(r, c, v)| Triplet::new(i * n + r, i * n + c, wi * v)));
        }
        let size = (q + 1) * n;
        let singular = |reason: String| Error::SingularSlab { slab: slab_index + 1, reason };
        let mat = SparseColMat::<usize, f64>::try_new_from_triplets(size, size, &triplets)
            .map_err(|e| singular(format!("{e:?}")))?;
        let lu = mat.sp_lu().map_err(|e| singular(format!("{e:?}")))?;
        Ok(Self { key, n, solver: SlabSolver::Coupled(lu), ell0 })
    }

    /// Whether the stage-decoupled symmetric solver is in use.
    pub fn is_split(&self) -> bool {
        matches!(self.solver, SlabSolver::Split(_))
    }

    fn matches(&self, slab: &SlabRule) -> bool {
        self.key == (slab.tau().to_bits(), slab.rule().sigma().to_bits())
    }

    /// Solves for the nodal vectors given loads `F(t_i)` and the incoming state.
    pub fn solve(
        &self,
        m0: &CsrMatrix,
        slab: &SlabRule,
        loads: &[Vec<f64>],
        u_prev: &[f64],
        slab_index: usize,
    ) -> Result<Vec<Vec<f64>>> {
        let n = self.n;
        let q1 = loads.len();
        let m0u = m0.mul_vec(u_prev);
        let stacked: Vec<Vec<f64>> = loads
            .iter()
            .enumerate()
            .map(|(i, load)| {
                let wi = slab.weights()[i];
                (0..n).map(|r| wi * load[r] + self.ell0[i] * m0u[r]).collect()
            })
            .collect();
        let out = match &self.solver {
            SlabSolver::Split(split) => split.solve(&stacked),
            SlabSolver::Coupled(lu) => {
                let mut rhs = Mat::<f64>::from_fn(q1 * n, 1, |g, _| stacked[g / n][g % n]);
                lu.solve_in_place(rhs.as_mut());
                (0..q1).map(|i| (0..n).map(|r| rhs[(i * n + r, 0)]).collect()).collect::<Vec<Vec<f64>>>()
            }
        };
        if out.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::SingularSlab { slab: slab_index + 1, reason: "non-finite solution".into() });
        }
        Ok(out)
    }
}

/// Loads at the slab nodes, scaled by `e^{-ρt}` for the transformed variant.
fn slab_loads(problem: &EvolutionaryProblem, slab: &SlabRule, variant: Variant, rho: f64) -> Vec<Vec<f64>> {
    slab.nodes()
        .par_iter()
        .map(|&t| {
            let mut f = problem.eval_rhs(t);
            if variant == Variant::Transformed {
                let scale = (-rho * t).exp();
                f.iter_mut().for_each(|v| *v *= scale);
            }
            f
        })
        .collect()
}

/// Solves one slab from scratch.
pub fn solve_slab(
    problem: &EvolutionaryProblem,
    slab: &SlabRule,
    variant: Variant,
    u_prev: &[f64],
) -> Result<Vec<Vec<f64>>> {
    let rho = slab.rho();
    let expected = variant_sigma(variant, rho, slab.tau());
    if (slab.rule().sigma() - expected).abs() > 1e-12 * expected.max(1.0) {
        return config_err(format!("slab rule sigma {} does not match the {variant} variant", slab.rule().sigma()));
    }
    let l = variant_operator(problem, variant, rho);
    let classes = field_classes(&problem.m0, &problem.m1, &problem.a);
    let op = SlabOperator::factorize(&problem.m0, &l, classes.as_deref(), slab, 0)?;
    op.solve(&problem.m0, slab, &slab_loads(problem, slab, variant, rho), u_prev, 0)
}

/// Marches the dG(q) scheme over `mesh`.
pub fn march(problem: &EvolutionaryProblem, mesh: &TimeMesh, q: usize, rho: f64, variant: Variant) -> Result<DiscreteSolution> {
    march_with_cache(problem, mesh, q, rho, variant, &RuleCache::new())
}

pub fn march_with_cache(
    problem: &EvolutionaryProblem,
    mesh: &TimeMesh,
    q: usize,
    rho: f64,
    variant: Variant,
    cache: &RuleCache,
) -> Result<DiscreteSolution> {
    if rho < problem.rho0 {
        return config_err(format!("rho = {rho} is below the admissible threshold {}", problem.rho0));
    }
    let l = variant_operator(problem, variant, rho);
    let classes = field_classes(&problem.m0, &problem.m1, &problem.a);
    let mut op: Option<SlabOperator> = None;
    let mut rules = Vec::with_capacity(mesh.n_slabs());
    let mut values = Vec::with_capacity(mesh.n_slabs());
    let mut u_prev = problem.x0.clone();
    for m in 0..mesh.n_slabs() {
        let tau = mesh.tau(m);
        let sigma = variant_sigma(variant, rho, tau);
        let rule = cache.get(q, sigma)?;
        let slab_rho = if variant == Variant::Weighted { rho } else { 0.0 };
        let slab = map_to_slab(rule.clone(), mesh.t_left(m), tau, slab_rho)?;
        if !op.as_ref().is_some_and(|o| o.matches(&slab)) {
            op = Some(SlabOperator::factorize(&problem.m0, &l, classes.as_deref(), &slab, m)?);
        }
        let loads = slab_loads(problem, &slab, variant, rho);
        let nodal = op.as_ref().unwrap().solve(&problem.m0, &slab, &loads, &u_prev, m)?;
        u_prev = nodal[q].clone();
        rules.push(rule);
        values.push(nodal);
    }
    DiscreteSolution::new(q, rho, variant, mesh.clone(), rules, values, problem.x0.clone())
}
