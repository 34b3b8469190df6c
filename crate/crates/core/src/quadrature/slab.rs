use std::sync::Arc;

use super::radau::WeightedRadauRule;
use crate::error::{config_err, Result};
use crate::poly::LagrangeBasis;

/// A reference rule mapped onto the slab `(t_left, t_left + τ]`.
///
/// Weights already carry the factor `τ`, so `Q{v} = Σ W_i v(t_i)` approximates
/// `∫ v(t) e^{-2ρ(t - t_left)} dt` over the slab.
#[derive(Debug, Clone)]
pub struct SlabRule {
    rule: Arc<WeightedRadauRule>,
    t_left: f64,
    tau: f64,
    rho: f64,
    mapped_nodes: Vec<f64>,
    mapped_weights: Vec<f64>,
}

impl SlabRule {
    pub fn rule(&self) -> &WeightedRadauRule {
        &self.rule
    }

    pub fn shared_rule(&self) -> Arc<WeightedRadauRule> {
        Arc::clone(&self.rule)
    }

    pub fn t_left(&self) -> f64 {
        self.t_left
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn nodes(&self) -> &[f64] {
        &self.mapped_nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.mapped_weights
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.mapped_nodes
            .iter()
            .zip(&self.mapped_weights)
            .map(|(&t, &w)| w * f(t))
            .sum()
    }
}

/// Maps `rule` onto `(t_left, t_left + τ]`; the rule must have been built
/// for `σ = ρτ`.
pub fn map_to_slab(rule: Arc<WeightedRadauRule>, t_left: f64, tau: f64, rho: f64) -> Result<SlabRule> {
    if !(tau > 0.0) {
        return config_err(format!("slab length must be positive, got {tau}"));
    }
    let expected = rho * tau;
    if (rule.sigma() - expected).abs() > 1e-12 * expected.abs().max(1.0) {
        return config_err(format!(
            "rule built for sigma={} but slab needs rho*tau={expected}",
            rule.sigma()
        ));
    }
    let mapped_nodes = rule.nodes().iter().map(|s| t_left + tau * s).collect();
    let mapped_weights = rule.weights().iter().map(|w| tau * w).collect();
    Ok(SlabRule { rule, t_left, tau, rho, mapped_nodes, mapped_weights })
}

/// Degree-`q` polynomial on a slab interpolating values at the Radau nodes.
#[derive(Debug, Clone)]
pub struct SlabInterpolant {
    basis: LagrangeBasis,
    t_left: f64,
    tau: f64,
    values: Vec<f64>,
}

impl SlabInterpolant {
    pub fn eval(&self, t: f64) -> f64 {
        self.basis.interpolate(&self.values, (t - self.t_left) / self.tau)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Radau-point Lagrange interpolation on a slab.
pub fn radau_interpolate(slab: &SlabRule, values: &[f64]) -> Result<SlabInterpolant> {
    if values.len() != slab.nodes().len() {
        return config_err(format!(
            "expected {} nodal values, got {}",
            slab.nodes().len(),
            values.len()
        ));
    }
    Ok(SlabInterpolant {
        basis: LagrangeBasis::new(slab.rule().nodes()),
        t_left: slab.t_left(),
        tau: slab.tau(),
        values: values.to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::build_weighted_radau;
    use approx::assert_relative_eq;

    fn rule(q: usize, sigma: f64) -> Arc<WeightedRadauRule> {
        Arc::new(build_weighted_radau(q, sigma).unwrap())
    }

    #[test]
    fn unit_slab_constant() {
        let s = map_to_slab(rule(0, 0.0), 0.0, 1.0, 0.0).unwrap();
        assert_relative_eq!(s.integrate(|_| 1.0), 1.0);
    }

    #[test]
    fn shifted_slab_linear() {
        let s = map_to_slab(rule(1, 0.0), 2.0, 0.5, 0.0).unwrap();
        assert_relative_eq!(s.integrate(|t| t), 1.125, epsilon = 1e-14);
    }

    #[test]
    fn weighted_slab_constant() {
        let s = map_to_slab(rule(1, 0.5), 0.0, 0.25, 2.0).unwrap();
        assert_relative_eq!(s.integrate(|_| 1.0), (1.0 - (-1.0f64).exp()) / 4.0, epsilon = 1e-15);
    }

    #[test]
    fn weighted_slab_polynomials_exact() {
        // ∫_{t0}^{t0+τ} t^k e^{-2ρ(t-t0)} dt by composite Gauss as oracle
        let (t0, tau, rho) = (0.3, 0.2, 3.0);
        let s = map_to_slab(rule(3, rho * tau), t0, tau, rho).unwrap();
        let (gx, gw) = crate::poly::gauss_legendre_unit(30);
        for k in 0..=6 {
            let exact: f64 = gx
                .iter()
                .zip(&gw)
                .map(|(x, w)| {
                    let t = t0 + tau * x;
                    tau * w * t.powi(k) * (-2.0 * rho * (t - t0)).exp()
                })
                .sum();
            assert_relative_eq!(s.integrate(|t| t.powi(k)), exact, max_relative = 1e-13);
        }
    }

    #[test]
    fn sigma_mismatch_is_rejected() {
        assert!(map_to_slab(rule(1, 0.5), 0.0, 0.25, 1.0).is_err());
    }

    #[test]
    fn interpolation_reproduces_polynomials() {
        let s = map_to_slab(rule(2, 0.0), 1.0, 0.5, 0.0).unwrap();
        let vals: Vec<f64> = s.nodes().iter().map(|t| t * t).collect();
        let p = radau_interpolate(&s, &vals).unwrap();
        for t in [1.0, 1.1, 1.37, 1.5] {
            assert_relative_eq!(p.eval(t), t * t, epsilon = 1e-13);
        }
        let c = radau_interpolate(&s, &[2.5; 3]).unwrap();
        assert_relative_eq!(c.eval(1.2), 2.5, epsilon = 1e-14);
        assert!(radau_interpolate(&s, &[1.0]).is_err());
    }

    #[test]
    fn quadrature_of_interpolant_equals_quadrature_of_function() {
        let s = map_to_slab(rule(1, 0.0), 0.0, 1.0, 0.0).unwrap();
        let vals: Vec<f64> = s.nodes().iter().map(|t| t.exp()).collect();
        let p = radau_interpolate(&s, &vals).unwrap();
        let expected = 0.75 * (1.0f64 / 3.0).exp() + 0.25 * 1.0f64.exp();
        assert_relative_eq!(s.integrate(|t| p.eval(t)), expected, epsilon = 1e-14);
        assert_relative_eq!(s.integrate(f64::exp), expected, epsilon = 1e-14);
    }
}
