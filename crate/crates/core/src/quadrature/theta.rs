use super::radau::WeightedRadauRule;
use crate::poly::Polynomial;

/// Degree `q+1` polynomial on `[0, 1]` vanishing at every node of a Radau
/// rule and equal to one at `s = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaPoly {
    q: usize,
    poly: Polynomial,
    derivative: Polynomial,
}

impl ThetaPoly {
    pub fn degree(&self) -> usize {
        self.q + 1
    }

    pub fn polynomial(&self) -> &Polynomial {
        &self.poly
    }

    pub fn eval(&self, s: f64) -> f64 {
        self.poly.eval(s)
    }

    /// `dθ/ds`.
    pub fn eval_derivative(&self, s: f64) -> f64 {
        self.derivative.eval(s)
    }
}

/// `θ(s) = Π_i (s - s_i) / Π_i (-s_i)`.
pub fn build_theta(rule: &WeightedRadauRule) -> ThetaPoly {
    let nodes = rule.nodes();
    let scale = 1.0 / nodes.iter().map(|s| -s).product::<f64>();
    let poly = Polynomial::from_roots(nodes, scale);
    let derivative = poly.derivative();
    ThetaPoly { q: rule.degree(), poly, derivative }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::build_weighted_radau;
    use approx::assert_relative_eq;

    #[test]
    fn piecewise_constant_case() {
        let t = build_theta(&build_weighted_radau(0, 0.0).unwrap());
        for s in [0.0, 0.3, 1.0] {
            assert_relative_eq!(t.eval(s), 1.0 - s);
        }
    }

    #[test]
    fn defining_conditions() {
        for (q, sigma) in [(1, 0.0), (2, 0.5), (4, 3.0)] {
            let r = build_weighted_radau(q, sigma).unwrap();
            let t = build_theta(&r);
            assert_relative_eq!(t.eval(0.0), 1.0, epsilon = 1e-13);
            for &s in r.nodes() {
                assert!(t.eval(s).abs() < 1e-13);
            }
            assert_eq!(t.polynomial().degree(), q + 1);
            let lead = 1.0 / r.nodes().iter().map(|s| -s).product::<f64>();
            assert_relative_eq!(t.polynomial().leading_coefficient(), lead, max_relative = 1e-14);
        }
    }
}
