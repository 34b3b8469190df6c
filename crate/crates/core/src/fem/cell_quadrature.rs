//! Quadrature on the reference interval `[0, 1]` and the reference triangle
//! `{x̂, ŷ ≥ 0, x̂ + ŷ ≤ 1}`.

use crate::poly::gauss_legendre_unit;

/// Points and weights on a reference cell; weights sum to the cell measure.
#[derive(Debug, Clone)]
pub struct CellQuadrature {
    pub points: Vec<[f64; 2]>,
    pub weights: Vec<f64>,
}

impl CellQuadrature {
    /// Gauss rule on `[0, 1]` exact for polynomials of degree `≤ order`.
    pub fn interval(order: usize) -> Self {
        let (x, w) = gauss_legendre_unit(order / 2 + 1);
        Self { points: x.into_iter().map(|s| [s, 0.0]).collect(), weights: w }
    }

    /// Collapsed (Duffy) Gauss rule on the triangle exact for degree `≤ order`.
    pub fn triangle(order: usize) -> Self {
        let n = (order + 2).div_ceil(2);
        let (x, w) = gauss_legendre_unit(n);
        let mut points = Vec::with_capacity(n * n);
        let mut weights = Vec::with_capacity(n * n);
        for (&xi, &wxi) in x.iter().zip(&w) {
            for (&eta, &weta) in x.iter().zip(&w) {
                points.push([xi, eta * (1.0 - xi)]);
                weights.push(wxi * weta * (1.0 - xi));
            }
        }
        Self { points, weights }
    }

    pub fn for_dim(dim: usize, order: usize) -> Self {
        if dim == 1 {
            Self::interval(order)
        } else {
            Self::triangle(order)
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factorial(n: u32) -> f64 {
        (1..=n).map(f64::from).product()
    }

    #[test]
    fn triangle_monomials() {
        for order in 0..=12 {
            let q = CellQuadrature::triangle(order);
            for a in 0..=order as u32 {
                for b in 0..=(order as u32 - a) {
                    let approx: f64 = q
                        .points
                        .iter()
                        .zip(&q.weights)
                        .map(|(p, w)| w * p[0].powi(a as i32) * p[1].powi(b as i32))
                        .sum();
                    let exact = factorial(a) * factorial(b) / factorial(a + b + 2);
                    assert!((approx - exact).abs() < 1e-14, "order {order}: x^{a} y^{b}");
                }
            }
        }
    }

    #[test]
    fn interval_monomials() {
        for order in 0..=12 {
            let q = CellQuadrature::interval(order);
            for a in 0..=order as i32 {
                let approx: f64 = q.points.iter().zip(&q.weights).map(|(p, w)| w * p[0].powi(a)).sum();
                assert!((approx - 1.0 / (a as f64 + 1.0)).abs() < 1e-14);
            }
        }
    }
}
