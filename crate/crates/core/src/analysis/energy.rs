//! Discrete energy balances of the dG scheme and of its post-processing.
//!
//! Testing slab `m` with `U` and using that `⟨M0 U', U⟩` is integrated
//! exactly gives, with `ε_m = e^{-2ρ t_m}`,
//!
//! `ε_i |U(t_i^-)|²_{M0} + Σ_{m<i} ε_m |⟦U⟧_m|²_{M0} + 2 Σ_{m<i} ε_m Q_m⟨(ρM0 + M1 + A)U, U⟩`
//! `  = |x0|²_{M0} + 2 Σ_{m<i} ε_m Q_m⟨F, U⟩`
//!
//! for the weighted scheme. The transformed scheme is the case `ρ = 0` of
//! the same identity with operator `ρM0 + M1 + A` and data `e^{-ρt} F`.

use serde::Serialize;

use crate::error::{config_err, Result};
use crate::evolution::{variant_operator, DiscreteSolution, EvolutionaryProblem, Variant};
use crate::postprocess::PostprocessedSolution;

/// Both sides of the balance up to the mesh point `t`.
#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct EnergyRow {
    pub t: f64,
    /// `ε_i |U(t_i^-)|²_{M0}`.
    pub energy: f64,
    /// Jump dissipation (dG) or twice the summed quadrature defect (post-processed).
    pub dissipation: f64,
    /// `2 Σ ε_m Q_m⟨L U, U⟩`.
    pub operator_term: f64,
    /// `2 Σ ε_m Q_m⟨F, U⟩`.
    pub source_term: f64,
    pub initial: f64,
    pub lhs: f64,
    pub rhs: f64,
}

impl EnergyRow {
    pub fn gap(&self) -> f64 {
        self.lhs - self.rhs
    }

    /// `|lhs − rhs| / max(|lhs|, |rhs|)`, or the absolute gap if both vanish.
    pub fn relative_gap(&self) -> f64 {
        let scale = self.lhs.abs().max(self.rhs.abs());
        if scale == 0.0 {
            self.gap().abs()
        } else {
            self.gap().abs() / scale
        }
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct EnergyAudit {
    pub rows: Vec<EnergyRow>,
}

impl EnergyAudit {
    pub fn max_relative_gap(&self) -> f64 {
        self.rows.iter().map(EnergyRow::relative_gap).fold(0.0, f64::max)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Scaled data `F̂(t)` and operator of the identity for the given variant.
fn identity_parts(problem: &EvolutionaryProblem, variant: Variant, rho: f64) -> (f64, crate::fem::CsrMatrix) {
    // ρ_w: exponent of the time weight inside the identity
    match variant {
        Variant::Weighted => (rho, variant_operator(problem, Variant::Transformed, rho)),
        Variant::Transformed => (0.0, variant_operator(problem, Variant::Transformed, rho)),
    }
}

fn scaled_rhs(problem: &EvolutionaryProblem, variant: Variant, rho: f64, t: f64) -> Vec<f64> {
    let mut f = problem.eval_rhs(t);
    if variant == Variant::Transformed {
        let s = (-rho * t).exp();
        f.iter_mut().for_each(|v| *v *= s);
    }
    f
}

/// Energy balance of a dG solution at every mesh point `t_1, …, t_M`.
pub fn energy_audit(solution: &DiscreteSolution, problem: &EvolutionaryProblem) -> Result<EnergyAudit> {
    if solution.n_dofs() != problem.n_dofs() {
        return config_err("solution and problem sizes differ");
    }
    let (variant, rho) = (solution.variant(), solution.rho());
    let (rho_w, l) = identity_parts(problem, variant, rho);
    let mesh = solution.time_mesh();
    let initial = problem.m0.inner(solution.x0(), solution.x0());
    let (mut dissipation, mut operator_term, mut source_term) = (0.0, 0.0, 0.0);
    let mut rows = Vec::with_capacity(mesh.n_slabs());
    for m in 0..mesh.n_slabs() {
        let eps = (-2.0 * rho_w * mesh.t_left(m)).exp();
        let tau = mesh.tau(m);
        let rule = solution.rule(m);
        let jump = solution.jump(m);
        dissipation += eps * problem.m0.inner(&jump, &jump);
        for ((&s, &w), u) in rule.nodes().iter().zip(rule.weights()).zip(solution.nodal(m)) {
            let f = scaled_rhs(problem, variant, rho, mesh.time(m, s));
            operator_term += 2.0 * eps * tau * w * l.inner(u, u);
            source_term += 2.0 * eps * tau * w * dot(&f, u);
        }
        let t = mesh.t_left(m) + tau;
        let end = solution.left_limit(m);
        let energy = (-2.0 * rho_w * t).exp() * problem.m0.inner(end, end);
        rows.push(EnergyRow {
            t,
            energy,
            dissipation,
            operator_term,
            source_term,
            initial,
            lhs: energy + dissipation + operator_term,
            rhs: initial + source_term,
        });
    }
    Ok(EnergyAudit { rows })
}

/// Energy balance of the post-processed transformed solution `Ṽ`.
///
/// `Ṽ` is continuous, so no jump terms appear. Its time derivative term is a
/// polynomial of degree `2q + 1`, one more than the Radau rule integrates
/// exactly; the defect `R_m = Q_m⟨M0 Ṽ', Ṽ⟩ − ½(|Ṽ(t_{m+1})|² − |Ṽ(t_m)|²)`
/// is reported as `dissipation = 2 Σ R_m`. The balance
/// `|Ṽ(t_i)|² + 2ΣR_m + 2ΣQ_m⟨LṼ,Ṽ⟩ = |x0|² + 2ΣQ_m⟨F̃,Ṽ⟩`
/// holds iff `Ṽ` is continuous and satisfies the collocation equations.
pub fn postprocessed_energy_audit(
    pp: &PostprocessedSolution,
    problem: &EvolutionaryProblem,
    rho: f64,
) -> Result<EnergyAudit> {
    let base = pp.base();
    if base.variant() != Variant::Transformed && base.rho() != 0.0 {
        return config_err("the post-processed balance needs the unweighted rule");
    }
    let l = variant_operator(problem, Variant::Transformed, rho);
    let mesh = base.time_mesh();
    let m0 = &problem.m0;
    let initial = m0.inner(base.x0(), base.x0());
    let (mut dissipation, mut operator_term, mut source_term) = (0.0, 0.0, 0.0);
    let mut rows = Vec::with_capacity(mesh.n_slabs());
    for m in 0..mesh.n_slabs() {
        let tau = mesh.tau(m);
        let rule = base.rule(m);
        let mut q_deriv = 0.0;
        for (&s, &w) in rule.nodes().iter().zip(rule.weights()) {
            let v = pp.eval(m, s);
            let dv = pp.eval_derivative(m, s);
            let f = scaled_rhs(problem, Variant::Transformed, rho, mesh.time(m, s));
            q_deriv += tau * w * m0.inner(&dv, &v);
            operator_term += 2.0 * tau * w * l.inner(&v, &v);
            source_term += 2.0 * tau * w * dot(&f, &v);
        }
        let (start, end) = (pp.eval(m, 0.0), pp.eval(m, 1.0));
        let (e0, e1) = (m0.inner(&start, &start), m0.inner(&end, &end));
        dissipation += 2.0 * (q_deriv - 0.5 * (e1 - e0));
        rows.push(EnergyRow {
            t: mesh.t_left(m) + tau,
            energy: e1,
            dissipation,
            operator_term,
            source_term,
            initial,
            lhs: e1 + dissipation + operator_term,
            rhs: initial + source_term,
        });
    }
    Ok(EnergyAudit { rows })
}
