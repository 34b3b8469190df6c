//! Jump-cancelling post-processing `Ṽ = V_h − ⟦V_h⟧_m θ_m` on every slab.
//!
//! `θ_m` has degree `q + 1`, vanishes at the slab's Radau nodes and equals 1
//! at its left endpoint, so `Ṽ` is continuous, agrees with `V_h` at all
//! nodes and, for the unweighted rule, solves the Radau collocation
//! (dG-C0) equations.

use crate::error::{config_err, Result};
use crate::evolution::{DiscreteSolution, EvolutionaryProblem, Snapshot, TimeField, TimeMesh, Variant};
use crate::quadrature::{build_theta, ThetaPoly};

/// Continuous piecewise polynomial of degree `q + 1` built from a dG solution.
#[derive(Debug, Clone)]
pub struct PostprocessedSolution {
    base: DiscreteSolution,
    thetas: Vec<ThetaPoly>,
    jumps: Vec<Vec<f64>>,
}

/// Post-processes with `θ` built from each slab's own quadrature nodes.
///
/// For `q = 0` this is the piecewise linear interpolant of the nodal values;
/// no gain in order is claimed in that case.
pub fn postprocess(solution: &DiscreteSolution) -> PostprocessedSolution {
    let n = solution.time_mesh().n_slabs();
    let thetas = (0..n).map(|m| build_theta(solution.rule(m))).collect();
    let jumps = (0..n).map(|m| solution.jump(m)).collect();
    PostprocessedSolution { base: solution.clone(), thetas, jumps }
}

/// `Ũ_h = U_h − ⟦U_h⟧ θ_ρ`, with `θ_ρ` vanishing at the ρ-weighted nodes.
pub fn postprocess_weighted(solution: &DiscreteSolution) -> Result<PostprocessedSolution> {
    if solution.variant() != Variant::Weighted {
        return config_err("weighted post-processing needs a solution of the weighted scheme");
    }
    Ok(postprocess(solution))
}

impl PostprocessedSolution {
    pub fn base(&self) -> &DiscreteSolution {
        &self.base
    }

    pub fn theta(&self, m: usize) -> &ThetaPoly {
        &self.thetas[m]
    }

    /// Jump of the base solution removed on slab `m`.
    pub fn correction(&self, m: usize) -> &[f64] {
        &self.jumps[m]
    }

    pub fn eval(&self, m: usize, s: f64) -> Vec<f64> {
        let mut v = self.base.eval(m, s);
        let th = self.thetas[m].eval(s);
        v.iter_mut().zip(&self.jumps[m]).for_each(|(a, j)| *a -= th * j);
        v
    }

    /// Time derivative at `t = t_m + s τ_m`.
    pub fn eval_derivative(&self, m: usize, s: f64) -> Vec<f64> {
        let mut v = self.base.eval_derivative(m, s);
        let th = self.thetas[m].eval_derivative(s) / self.base.time_mesh().tau(m);
        v.iter_mut().zip(&self.jumps[m]).for_each(|(a, j)| *a -= th * j);
        v
    }

    /// Largest `|Ṽ(t_m^+) − Ṽ(t_m^-)|_∞` over all slab boundaries
    /// (with `Ṽ(0^-) = x0`).
    pub fn max_continuity_defect(&self) -> f64 {
        (0..self.jumps.len())
            .map(|m| {
                let right = self.eval(m, 0.0);
                let left: Vec<f64> =
                    if m == 0 { self.base.x0().to_vec() } else { self.eval(m - 1, 1.0) };
                right.iter().zip(&left).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
            })
            .fold(0.0, f64::max)
    }

    /// `e^{ρt} V_h − e^{ρ t_m} ⟦V_h⟧_m θ_m`: the lift that applies the
    /// post-processing to `E_ρ V_h` (whose jumps are `e^{ρ t_m} ⟦V_h⟧_m`).
    pub fn lift_of_base(&self, rho: f64) -> LiftedPostprocessed<'_> {
        LiftedPostprocessed { pp: self, rho }
    }
}

impl TimeField for PostprocessedSolution {
    fn time_mesh(&self) -> &TimeMesh {
        self.base.time_mesh()
    }

    fn at(&self, m: usize, s: f64) -> Snapshot {
        Snapshot::Coeffs(self.eval(m, s))
    }
}

/// See [`PostprocessedSolution::lift_of_base`].
pub struct LiftedPostprocessed<'a> {
    pp: &'a PostprocessedSolution,
    rho: f64,
}

impl TimeField for LiftedPostprocessed<'_> {
    fn time_mesh(&self) -> &TimeMesh {
        self.pp.time_mesh()
    }

    fn at(&self, m: usize, s: f64) -> Snapshot {
        let mesh = self.pp.time_mesh();
        let (et, em) = ((self.rho * mesh.time(m, s)).exp(), (self.rho * mesh.t_left(m)).exp());
        let th = self.pp.thetas[m].eval(s);
        let mut v = self.pp.base.eval(m, s);
        v.iter_mut().zip(&self.pp.jumps[m]).for_each(|(a, j)| *a = et * *a - em * th * j);
        Snapshot::Coeffs(v)
    }
}

/// Collocation defect of a post-processed transformed solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollocationReport {
    /// `max_{m,i} |M0 Ṽ'(t_i) + (ρM0 + M1 + A) Ṽ(t_i) − F̃(t_i)|₂`.
    pub max_residual: f64,
    /// `max_{m,i} |F̃(t_i)|₂`.
    pub rhs_scale: f64,
}

impl CollocationReport {
    pub fn relative(&self) -> f64 {
        if self.rhs_scale == 0.0 {
            self.max_residual
        } else {
            self.max_residual / self.rhs_scale
        }
    }
}

/// Evaluates the collocation equations at every Radau node (Euclidean norm
/// of the dof-space residual).
pub fn collocation_residual(pp: &PostprocessedSolution, problem: &EvolutionaryProblem, rho: f64) -> CollocationReport {
    let mesh = pp.time_mesh();
    let l = crate::evolution::variant_operator(problem, Variant::Transformed, rho);
    let mut report = CollocationReport { max_residual: 0.0, rhs_scale: 0.0 };
    for m in 0..mesh.n_slabs() {
        for &s in pp.base.rule(m).nodes() {
            let t = mesh.time(m, s);
            let scale = (-rho * t).exp();
            let f: Vec<f64> = problem.eval_rhs(t).iter().map(|v| v * scale).collect();
            let mut r = problem.m0.mul_vec(&pp.eval_derivative(m, s));
            let lv = l.mul_vec(&pp.eval(m, s));
            r.iter_mut().zip(&lv).zip(&f).for_each(|((a, b), c)| *a += b - c);
            let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
            report.max_residual = report.max_residual.max(norm(&r));
            report.rhs_scale = report.rhs_scale.max(norm(&f));
        }
    }
    report
}
