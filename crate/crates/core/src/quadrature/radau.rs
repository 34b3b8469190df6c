use std::sync::OnceLock;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use super::moments::exp_moments;
use crate::error::{Error, Result};
use crate::poly::gauss_legendre_unit;

/// Largest supported polynomial degree.
pub const MAX_DEGREE: usize = 10;
/// Largest supported weight exponent `σ = ρτ`.
pub const MAX_SIGMA: f64 = 10.0;

/// Points of the discrete measure used to generate recurrence coefficients.
const DISCRETE_POINTS: usize = 80;

/// Right-sided Gauss-Radau rule on `[0, 1]` for the weight `e^{-2σs}`.
///
/// With `q + 1` nodes `0 < s_0 < ... < s_q = 1` the rule integrates
/// `p(s) e^{-2σs}` exactly for every polynomial `p` of degree `≤ 2q`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightedRadauRule {
    q: usize,
    sigma: f64,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl WeightedRadauRule {
    pub fn degree(&self) -> usize {
        self.q
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `Σ_i w_i f(s_i)`.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&s, &w)| w * f(s)).sum()
    }

    /// Relative residuals `|Σ w_i s_i^k - μ_k| / μ_k` for `k = 0..=2q`.
    pub fn moment_residuals(&self) -> Vec<f64> {
        let moments = exp_moments(self.sigma, 2 * self.q);
        moments
            .iter()
            .enumerate()
            .map(|(k, &mu)| (self.apply(|s| s.powi(k as i32)) - mu).abs() / mu)
            .collect()
    }
}

fn discrete_legendre() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre_unit(DISCRETE_POINTS))
}

/// Recurrence coefficients `(α_k, β_k)` of the monic polynomials orthogonal
/// with respect to `e^{-2σs}` on `[0, 1]`, `k = 0..n`.
///
/// Uses the Stieltjes procedure on a Gauss-Legendre discretization of the
/// measure; the discretization is exact to machine precision for the
/// supported `σ` range.
fn recurrence_coefficients(sigma: f64, n: usize) -> (Vec<f64>, Vec<f64>) {
    let (x, w0) = discrete_legendre();
    let w: Vec<f64> = x
        .iter()
        .zip(w0)
        .map(|(&s, &w)| w * (-2.0 * sigma * s).exp())
        .collect();
    let mut alpha = Vec::with_capacity(n);
    let mut beta = Vec::with_capacity(n);
    let mut p_prev = vec![0.0; x.len()];
    let mut p = vec![1.0; x.len()];
    let mut norm_prev = 1.0;
    for k in 0..n {
        let norm: f64 = p.iter().zip(&w).map(|(pi, wi)| wi * pi * pi).sum();
        let a = p
            .iter()
            .zip(&w)
            .zip(x)
            .map(|((pi, wi), xi)| wi * xi * pi * pi)
            .sum::<f64>()
            / norm;
        let b = if k == 0 { norm } else { norm / norm_prev };
        alpha.push(a);
        beta.push(b);
        let next: Vec<f64> = (0..x.len())
            .map(|j| {
                let prev = if k == 0 { 0.0 } else { b * p_prev[j] };
                (x[j] - a) * p[j] - prev
            })
            .collect();
        p_prev = std::mem::replace(&mut p, next);
        norm_prev = norm;
    }
    (alpha, beta)
}

/// Builds the `(q+1)`-point right Radau rule for the weight `e^{-2σs}`.
///
/// The Jacobi matrix of the weight is modified so that `s = 1` becomes an
/// eigenvalue; its eigenvalues are the nodes and the squared first
/// eigenvector components (times `μ_0`) the weights.
pub fn build_weighted_radau(q: usize, sigma: f64) -> Result<WeightedRadauRule> {
    if q > MAX_DEGREE {
        return Err(Error::Quadrature(format!(
            "degree {q} outside the supported range 0..={MAX_DEGREE}"
        )));
    }
    if !sigma.is_finite() || !(0.0..=MAX_SIGMA).contains(&sigma) {
        return Err(Error::Quadrature(format!(
            "sigma {sigma} outside the supported range [0, {MAX_SIGMA}]"
        )));
    }
    let mu0 = exp_moments(sigma, 0)[0];
    if q == 0 {
        return Ok(WeightedRadauRule { q, sigma, nodes: vec![1.0], weights: vec![mu0] });
    }

    let (mut alpha, beta) = recurrence_coefficients(sigma, q + 1);
    // π_q(1) and π_{q-1}(1) by the three-term recurrence
    let (mut p_prev, mut p) = (0.0, 1.0);
    for k in 0..q {
        let next = (1.0 - alpha[k]) * p - if k == 0 { 0.0 } else { beta[k] * p_prev };
        p_prev = p;
        p = next;
    }
    alpha[q] = 1.0 - beta[q] * p_prev / p;

    let n = q + 1;
    let mut jacobi = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        jacobi[(i, i)] = alpha[i];
        if i + 1 < n {
            let off = beta[i + 1].sqrt();
            jacobi[(i, i + 1)] = off;
            jacobi[(i + 1, i)] = off;
        }
    }
    let eig = SymmetricEigen::try_new(jacobi, 1e-15, 10_000).ok_or_else(|| {
        Error::Quadrature(format!("eigenvalue iteration did not converge (q={q}, sigma={sigma})"))
    })?;
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|j| (eig.eigenvalues[j], mu0 * eig.eigenvectors[(0, j)].powi(2)))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));

    let (mut nodes, weights): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
    let last = nodes[q];
    if (last - 1.0).abs() > 1e-10 {
        return Err(Error::Quadrature(format!("endpoint node drifted to {last}")));
    }
    nodes[q] = 1.0;
    let ordered = nodes.windows(2).all(|w| w[0] < w[1]);
    if !ordered || nodes[0] <= 0.0 || weights.iter().any(|&w| !(w > 0.0)) {
        return Err(Error::Quadrature(format!(
            "degenerate rule for q={q}, sigma={sigma}: nodes {nodes:?}, weights {weights:?}"
        )));
    }
    Ok(WeightedRadauRule { q, sigma, nodes, weights })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn single_point_rule() {
        let r = build_weighted_radau(0, 0.0).unwrap();
        assert_eq!(r.nodes(), &[1.0]);
        assert_eq!(r.weights(), &[1.0]);
    }

    #[test]
    fn classical_two_point_rule() {
        let r = build_weighted_radau(1, 0.0).unwrap();
        assert_relative_eq!(r.nodes()[0], 1.0 / 3.0, epsilon = 1e-15);
        assert_eq!(r.nodes()[1], 1.0);
        assert_relative_eq!(r.weights()[0], 0.75, epsilon = 1e-15);
        assert_relative_eq!(r.weights()[1], 0.25, epsilon = 1e-15);
    }

    #[test]
    fn weighted_rule_is_exact() {
        let r = build_weighted_radau(2, 0.5).unwrap();
        let mu = exp_moments(0.5, 4);
        for k in 0..=4 {
            assert_relative_eq!(r.apply(|s| s.powi(k)), mu[k as usize], max_relative = 1e-12);
        }
    }

    #[test]
    fn high_degree_rules_stay_exact() {
        for q in 0..=MAX_DEGREE {
            for &sigma in &[0.0, 1e-3, 1.0, 10.0] {
                let r = build_weighted_radau(q, sigma).unwrap();
                let worst = r.moment_residuals().into_iter().fold(0.0, f64::max);
                assert!(worst < 1e-11, "q={q} sigma={sigma} residual {worst}");
            }
        }
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(build_weighted_radau(11, 0.0).is_err());
        assert!(build_weighted_radau(2, 10.5).is_err());
        assert!(build_weighted_radau(2, f64::NAN).is_err());
        assert!(build_weighted_radau(2, -1.0).is_err());
    }

    #[test]
    fn small_sigma_limit() {
        for q in 0..=5 {
            let a = build_weighted_radau(q, 1e-8).unwrap();
            let b = build_weighted_radau(q, 0.0).unwrap();
            for i in 0..=q {
                assert!((a.nodes()[i] - b.nodes()[i]).abs() <= 1e-6);
                assert!((a.weights()[i] - b.weights()[i]).abs() <= 1e-6);
            }
        }
    }
}
