//! Small one-dimensional polynomial helpers shared by the temporal and
//! spatial discretizations.

use std::f64::consts::PI;

/// Gauss-Legendre rule with `n` points mapped to `[0, 1]`.
///
/// Returns `(nodes, weights)` with nodes in ascending order; weights sum to 1.
pub fn gauss_legendre_unit(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0, "Gauss-Legendre rule needs at least one point");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess, then Newton on P_n.
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        // x is in descending order for increasing i
        nodes[i] = 0.5 * (1.0 - x);
        nodes[n - 1 - i] = 0.5 * (1.0 + x);
        weights[i] = 0.5 * w;
        weights[n - 1 - i] = 0.5 * w;
    }
    (nodes, weights)
}

/// Legendre polynomial `P_n(x)` on `[-1, 1]` and its derivative.
pub fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    if n == 0 {
        return (1.0, 0.0);
    }
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    let d = if (1.0 - x * x).abs() < 1e-300 {
        // endpoint formula
        let s = if x > 0.0 { 1.0 } else if n % 2 == 0 { -1.0 } else { 1.0 };
        s * nf * (nf + 1.0) / 2.0
    } else {
        nf * (x * p1 - p0) / (x * x - 1.0)
    };
    (p1, d)
}

/// Shifted Legendre polynomial `P_n(2s - 1)` on `[0, 1]`.
///
/// `P_n(1 - s) = (-1)^n P_n(s)`, which is what makes edge moments against
/// this family flip sign cleanly under a change of edge direction.
pub fn shifted_legendre(n: usize, s: f64) -> f64 {
    legendre_with_derivative(n, 2.0 * s - 1.0).0
}

/// Lagrange basis on a fixed set of distinct nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct LagrangeBasis {
    nodes: Vec<f64>,
    denominators: Vec<f64>,
}

impl LagrangeBasis {
    pub fn new(nodes: &[f64]) -> Self {
        let denominators = nodes
            .iter()
            .enumerate()
            .map(|(j, &sj)| {
                nodes
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != j)
                    .map(|(_, &sk)| sj - sk)
                    .product::<f64>()
            })
            .collect();
        Self { nodes: nodes.to_vec(), denominators }
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Values `ℓ_j(s)` of all basis functions.
    pub fn values(&self, s: f64) -> Vec<f64> {
        let n = self.nodes.len();
        (0..n)
            .map(|j| {
                let num: f64 = (0..n)
                    .filter(|&k| k != j)
                    .map(|k| s - self.nodes[k])
                    .product();
                num / self.denominators[j]
            })
            .collect()
    }

    /// Derivatives `ℓ_j'(s)` of all basis functions.
    pub fn derivatives(&self, s: f64) -> Vec<f64> {
        let n = self.nodes.len();
        (0..n)
            .map(|j| {
                let mut total = 0.0;
                for skip in 0..n {
                    if skip == j {
                        continue;
                    }
                    let prod: f64 = (0..n)
                        .filter(|&k| k != j && k != skip)
                        .map(|k| s - self.nodes[k])
                        .product();
                    total += prod;
                }
                total / self.denominators[j]
            })
            .collect()
    }

    /// Interpolant of `values` evaluated at `s`.
    pub fn interpolate(&self, values: &[f64], s: f64) -> f64 {
        self.values(s).iter().zip(values).map(|(l, v)| l * v).sum()
    }
}

/// Monomial-coefficient polynomial `c_0 + c_1 s + ...`.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    pub coefficients: Vec<f64>,
}

impl Polynomial {
    pub fn from_roots(roots: &[f64], scale: f64) -> Self {
        let mut c = vec![scale];
        for &r in roots {
            let mut next = vec![0.0; c.len() + 1];
            for (i, &ci) in c.iter().enumerate() {
                next[i + 1] += ci;
                next[i] -= r * ci;
            }
            c = next;
        }
        Self { coefficients: c }
    }

    pub fn degree(&self) -> usize {
        self.coefficients
            .iter()
            .rposition(|&c| c != 0.0)
            .unwrap_or(0)
    }

    pub fn eval(&self, s: f64) -> f64 {
        self.coefficients.iter().rev().fold(0.0, |acc, &c| acc * s + c)
    }

    pub fn derivative(&self) -> Polynomial {
        let coefficients = if self.coefficients.len() <= 1 {
            vec![0.0]
        } else {
            self.coefficients
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| i as f64 * c)
                .collect()
        };
        Polynomial { coefficients }
    }

    pub fn leading_coefficient(&self) -> f64 {
        self.coefficients[self.degree()]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gauss_legendre_integrates_monomials() {
        for n in 1..=40 {
            let (x, w) = gauss_legendre_unit(n);
            for k in 0..(2 * n) {
                let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(k as i32)).sum();
                assert_relative_eq!(q, 1.0 / (k as f64 + 1.0), max_relative = 1e-13);
            }
            assert!(x.windows(2).all(|p| p[0] < p[1]));
        }
    }

    #[test]
    fn lagrange_basis_is_cardinal_and_derivatives_match_fd() {
        let b = LagrangeBasis::new(&[0.1, 0.4, 0.7, 1.0]);
        for (i, &s) in b.nodes().iter().enumerate() {
            let v = b.values(s);
            for (j, vj) in v.iter().enumerate() {
                assert_relative_eq!(*vj, if i == j { 1.0 } else { 0.0 }, epsilon = 1e-14);
            }
        }
        let h = 1e-6;
        let d = b.derivatives(0.33);
        let (p, m) = (b.values(0.33 + h), b.values(0.33 - h));
        for j in 0..4 {
            assert_relative_eq!(d[j], (p[j] - m[j]) / (2.0 * h), epsilon = 1e-7);
        }
    }

    #[test]
    fn polynomial_from_roots() {
        let p = Polynomial::from_roots(&[1.0, 2.0], 1.0);
        assert_eq!(p.coefficients, vec![2.0, -3.0, 1.0]);
        assert_eq!(p.degree(), 2);
        assert_relative_eq!(p.derivative().eval(1.5), 0.0);
    }

    #[test]
    fn shifted_legendre_symmetry() {
        for n in 0..6 {
            let s = 0.23;
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            assert_relative_eq!(shifted_legendre(n, 1.0 - s), sign * shifted_legendre(n, s), epsilon = 1e-14);
        }
    }
}
