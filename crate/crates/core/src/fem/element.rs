//! Reference finite elements: Lagrange `P_k` on interval and triangle, and
//! Raviart-Thomas `RT_r` on the triangle.
//!
//! Shape functions are stored as coefficient vectors in a monomial (prime)
//! basis, obtained by inverting the generalized Vandermonde matrix of the
//! degrees of freedom.

use nalgebra::DMatrix;

use super::cell_quadrature::CellQuadrature;
use super::mesh::TRI_EDGE_VERTICES;
use crate::error::{config_err, Result};
use crate::poly::{gauss_legendre_unit, shifted_legendre, LagrangeBasis};

/// Reference vertices of the triangle.
pub const TRI_VERTICES: [[f64; 2]; 3] = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]];

/// Shape function data at one reference point.
///
/// Scalar elements put the value in `value[0]` and the reference gradient in
/// `deriv`; vector elements put the vector in `value` and the reference
/// divergence in `deriv[0]`.
#[derive(Debug, Clone, Default)]
pub struct ShapeTable {
    pub value: Vec<[f64; 2]>,
    pub deriv: Vec<[f64; 2]>,
}

/// Where a local degree of freedom lives; used to build global numberings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DofSite {
    Vertex(usize),
    /// `(local edge, index along the local edge direction)`.
    Edge(usize, usize),
    Interior(usize),
}

#[derive(Debug, Clone)]
pub enum RefElement {
    LagrangeInterval { k: usize, basis: LagrangeBasis },
    LagrangeTriangle { k: usize, exponents: Vec<(i32, i32)>, coeffs: DMatrix<f64>, nodes: Vec<[f64; 2]> },
    RaviartThomas { r: usize, coeffs: DMatrix<f64> },
}

fn monomial_exponents(k: usize) -> Vec<(i32, i32)> {
    let mut e = Vec::new();
    for total in 0..=k as i32 {
        for a in (0..=total).rev() {
            e.push((a, total - a));
        }
    }
    e
}

fn powi(x: f64, n: i32) -> f64 {
    if n <= 0 {
        1.0
    } else {
        x.powi(n)
    }
}

/// Value and gradient of `x^a y^b`.
fn monomial(p: [f64; 2], (a, b): (i32, i32)) -> (f64, [f64; 2]) {
    let v = powi(p[0], a) * powi(p[1], b);
    let dx = if a > 0 { a as f64 * powi(p[0], a - 1) * powi(p[1], b) } else { 0.0 };
    let dy = if b > 0 { b as f64 * powi(p[0], a) * powi(p[1], b - 1) } else { 0.0 };
    (v, [dx, dy])
}

/// Lagrange nodes of `P_k` on the reference triangle in dof order.
fn triangle_lagrange_nodes(k: usize) -> Vec<[f64; 2]> {
    let mut nodes = TRI_VERTICES.to_vec();
    let kf = k as f64;
    for pair in TRI_EDGE_VERTICES {
        let (a, b) = (TRI_VERTICES[pair[0]], TRI_VERTICES[pair[1]]);
        for j in 1..k {
            let s = j as f64 / kf;
            nodes.push([a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1])]);
        }
    }
    for j in 1..k {
        for i in 1..k {
            if i + j < k {
                nodes.push([i as f64 / kf, j as f64 / kf]);
            }
        }
    }
    nodes
}

/// Prime (monomial) functions of `RT_r`: value and divergence.
fn rt_primes(r: usize, p: [f64; 2]) -> Vec<([f64; 2], f64)> {
    let mut out = Vec::with_capacity((r + 1) * (r + 3));
    for &e in &monomial_exponents(r) {
        let (v, g) = monomial(p, e);
        out.push(([v, 0.0], g[0]));
        out.push(([0.0, v], g[1]));
    }
    // x·h for homogeneous h of degree r: div(x h) = (r + 2) h
    for a in (0..=r as i32).rev() {
        let (h, _) = monomial(p, (a, r as i32 - a));
        out.push(([p[0] * h, p[1] * h], (r as f64 + 2.0) * h));
    }
    out
}

/// Scaled outward-ish normal of a reference edge traversed from its lower to
/// its higher local vertex: the tangent rotated by −90°.
fn rotated_tangent(edge: usize) -> [f64; 2] {
    let [a, b] = TRI_EDGE_VERTICES[edge].map(|i| TRI_VERTICES[i]);
    [b[1] - a[1], -(b[0] - a[0])]
}

/// Applies the `RT_r` degrees of freedom to a reference vector field.
fn rt_dofs(r: usize, f: &dyn Fn([f64; 2]) -> [f64; 2], extra_order: usize) -> Vec<f64> {
    let (es, ew) = gauss_legendre_unit(r + 2 + extra_order);
    let mut dofs = Vec::with_capacity((r + 1) * (r + 3));
    for edge in 0..3 {
        let [a, b] = TRI_EDGE_VERTICES[edge].map(|i| TRI_VERTICES[i]);
        let n = rotated_tangent(edge);
        for j in 0..=r {
            let mut acc = 0.0;
            for (&s, &w) in es.iter().zip(&ew) {
                let v = f([a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1])]);
                acc += w * (v[0] * n[0] + v[1] * n[1]) * shifted_legendre(j, s);
            }
            dofs.push(acc);
        }
    }
    if r > 0 {
        let quad = CellQuadrature::triangle(2 * r + extra_order);
        let tests = monomial_exponents(r - 1);
        let values: Vec<[f64; 2]> = quad.points.iter().map(|&p| f(p)).collect();
        for &e in &tests {
            for c in 0..2 {
                let acc: f64 = quad
                    .points
                    .iter()
                    .zip(&quad.weights)
                    .zip(&values)
                    .map(|((&p, &w), v)| w * v[c] * monomial(p, e).0)
                    .sum();
                dofs.push(acc);
            }
        }
    }
    dofs
}

fn invert(m: DMatrix<f64>, what: &str) -> Result<DMatrix<f64>> {
    match m.try_inverse() {
        Some(inv) => Ok(inv),
        None => config_err(format!("{what}: singular Vandermonde matrix")),
    }
}

impl RefElement {
    pub fn lagrange_interval(k: usize) -> Result<Self> {
        if k == 0 {
            return config_err("Lagrange degree must be at least 1");
        }
        let mut nodes = vec![0.0, 1.0];
        nodes.extend((1..k).map(|j| j as f64 / k as f64));
        Ok(RefElement::LagrangeInterval { k, basis: LagrangeBasis::new(&nodes) })
    }

    pub fn lagrange_triangle(k: usize) -> Result<Self> {
        if k == 0 {
            return config_err("Lagrange degree must be at least 1");
        }
        let exponents = monomial_exponents(k);
        let nodes = triangle_lagrange_nodes(k);
        let n = nodes.len();
        // V[node, mono]; shape n = Σ_m C[m, n] mono_m with V C = I
        let v = DMatrix::from_fn(n, n, |i, j| monomial(nodes[i], exponents[j]).0);
        let coeffs = invert(v, "Lagrange triangle")?;
        Ok(RefElement::LagrangeTriangle { k, exponents, coeffs, nodes })
    }

    pub fn raviart_thomas(r: usize) -> Result<Self> {
        let n = (r + 1) * (r + 3);
        let columns: Vec<Vec<f64>> = (0..n)
            .map(|p| rt_dofs(r, &|x| rt_primes(r, x)[p].0, 0))
            .collect();
        let d = DMatrix::from_fn(n, n, |i, p| columns[p][i]);
        let coeffs = invert(d, "Raviart-Thomas")?;
        Ok(RefElement::RaviartThomas { r, coeffs })
    }

    pub fn n_basis(&self) -> usize {
        match self {
            RefElement::LagrangeInterval { k, .. } => k + 1,
            RefElement::LagrangeTriangle { nodes, .. } => nodes.len(),
            RefElement::RaviartThomas { r, .. } => (r + 1) * (r + 3),
        }
    }

    pub fn is_vector(&self) -> bool {
        matches!(self, RefElement::RaviartThomas { .. })
    }

    /// Location of each local dof.
    pub fn dof_sites(&self) -> Vec<DofSite> {
        match self {
            RefElement::LagrangeInterval { k, .. } => {
                let mut s = vec![DofSite::Vertex(0), DofSite::Vertex(1)];
                s.extend((0..k - 1).map(DofSite::Interior));
                s
            }
            RefElement::LagrangeTriangle { k, nodes, .. } => {
                let mut s: Vec<DofSite> = (0..3).map(DofSite::Vertex).collect();
                for e in 0..3 {
                    s.extend((1..*k).map(|j| DofSite::Edge(e, j)));
                }
                let n_int = nodes.len() - s.len();
                s.extend((0..n_int).map(DofSite::Interior));
                s
            }
            RefElement::RaviartThomas { r, .. } => {
                let mut s = Vec::new();
                for e in 0..3 {
                    s.extend((0..=*r).map(|j| DofSite::Edge(e, j)));
                }
                let n_int = self.n_basis() - s.len();
                s.extend((0..n_int).map(DofSite::Interior));
                s
            }
        }
    }

    /// Shape values and reference derivatives at `xh`.
    pub fn eval(&self, xh: [f64; 2]) -> ShapeTable {
        match self {
            RefElement::LagrangeInterval { basis, .. } => ShapeTable {
                value: basis.values(xh[0]).into_iter().map(|v| [v, 0.0]).collect(),
                deriv: basis.derivatives(xh[0]).into_iter().map(|d| [d, 0.0]).collect(),
            },
            RefElement::LagrangeTriangle { exponents, coeffs, .. } => {
                let monos: Vec<(f64, [f64; 2])> = exponents.iter().map(|&e| monomial(xh, e)).collect();
                let n = monos.len();
                let mut table = ShapeTable { value: vec![[0.0; 2]; n], deriv: vec![[0.0; 2]; n] };
                for b in 0..n {
                    let (mut v, mut dx, mut dy) = (0.0, 0.0, 0.0);
                    for (m, (mv, mg)) in monos.iter().enumerate() {
                        let c = coeffs[(m, b)];
                        v += c * mv;
                        dx += c * mg[0];
                        dy += c * mg[1];
                    }
                    table.value[b] = [v, 0.0];
                    table.deriv[b] = [dx, dy];
                }
                table
            }
            RefElement::RaviartThomas { r, coeffs } => {
                let primes = rt_primes(*r, xh);
                let n = primes.len();
                let mut table = ShapeTable { value: vec![[0.0; 2]; n], deriv: vec![[0.0; 2]; n] };
                for b in 0..n {
                    let (mut vx, mut vy, mut d) = (0.0, 0.0, 0.0);
                    for (p, (pv, pd)) in primes.iter().enumerate() {
                        let c = coeffs[(p, b)];
                        vx += c * pv[0];
                        vy += c * pv[1];
                        d += c * pd;
                    }
                    table.value[b] = [vx, vy];
                    table.deriv[b] = [d, 0.0];
                }
                table
            }
        }
    }

    /// Applies the local dof functionals to a function given on the
    /// reference cell (scalar elements use component 0).
    pub fn dof_functionals(&self, f: &dyn Fn([f64; 2]) -> [f64; 2]) -> Vec<f64> {
        match self {
            RefElement::LagrangeInterval { basis, .. } => basis.nodes().iter().map(|&s| f([s, 0.0])[0]).collect(),
            RefElement::LagrangeTriangle { nodes, .. } => nodes.iter().map(|&p| f(p)[0]).collect(),
            RefElement::RaviartThomas { r, .. } => rt_dofs(*r, f, 6),
        }
    }
}
