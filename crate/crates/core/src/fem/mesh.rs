//! Interval and triangle meshes with subdomain tags.

use serde::Serialize;

use crate::error::{config_err, Result};

/// Physical subdomain of a cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Region {
    Hyperbolic,
    Parabolic,
    Elliptic,
}

/// Multiplier attached to a mass block: everywhere, nowhere, or the
/// characteristic function of one region.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Indicator {
    One,
    Zero,
    Region(Region),
}

impl Indicator {
    pub fn value(self, tag: Region) -> f64 {
        match self {
            Indicator::One => 1.0,
            Indicator::Zero => 0.0,
            Indicator::Region(r) if r == tag => 1.0,
            Indicator::Region(_) => 0.0,
        }
    }
}

/// Equidistant mesh of `[a, b]`.
#[derive(Debug, Clone)]
pub struct IntervalMesh {
    a: f64,
    b: f64,
    vertices: Vec<f64>,
    tags: Vec<Region>,
}

impl IntervalMesh {
    pub fn vertices(&self) -> &[f64] {
        &self.vertices
    }

    pub fn n_cells(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn bounds(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    /// Tags every cell through its midpoint.
    pub fn with_regions(mut self, region_of: impl Fn(f64) -> Region) -> Self {
        self.tags = self.vertices.windows(2).map(|w| region_of(0.5 * (w[0] + w[1]))).collect();
        self
    }
}

pub fn build_interval_mesh(a: f64, b: f64, n: usize) -> Result<IntervalMesh> {
    if n == 0 {
        return config_err("interval mesh needs at least one cell");
    }
    if !(a < b) {
        return config_err(format!("interval [{a}, {b}] is empty"));
    }
    let h = (b - a) / n as f64;
    let mut vertices: Vec<f64> = (0..=n).map(|i| a + h * i as f64).collect();
    vertices[n] = b;
    Ok(IntervalMesh { a, b, vertices, tags: vec![Region::Hyperbolic; n] })
}

/// Conforming triangulation with counter-clockwise cells.
///
/// Local edge `i` of a triangle is opposite local vertex `i`; edges are stored
/// once with their vertices in ascending global order.
#[derive(Debug, Clone)]
pub struct TriMesh {
    vertices: Vec<[f64; 2]>,
    triangles: Vec<[usize; 3]>,
    edges: Vec<[usize; 2]>,
    cell_edges: Vec<[usize; 3]>,
    boundary_edge: Vec<bool>,
    boundary_vertex: Vec<bool>,
    tags: Vec<Region>,
    grid: Option<Grid>,
}

#[derive(Debug, Clone, Copy)]
struct Grid {
    n: usize,
    lo: f64,
    hi: f64,
}

/// Local vertex pairs of the local edges (edge `i` is opposite vertex `i`).
pub const TRI_EDGE_VERTICES: [[usize; 2]; 3] = [[1, 2], [0, 2], [0, 1]];

impl TriMesh {
    /// Builds topology from raw vertices and triangles; cells are reoriented
    /// counter-clockwise.
    pub fn new(vertices: Vec<[f64; 2]>, mut triangles: Vec<[usize; 3]>, tags: Vec<Region>) -> Result<Self> {
        if tags.len() != triangles.len() {
            return config_err("one region tag per triangle required");
        }
        for t in &mut triangles {
            let [a, b, c] = t.map(|i| vertices[i]);
            let det = (b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]);
            if det == 0.0 {
                return config_err("degenerate triangle");
            }
            if det < 0.0 {
                t.swap(1, 2);
            }
        }
        let mut edge_map = std::collections::HashMap::new();
        let mut edges = Vec::new();
        let mut counts = Vec::new();
        let mut cell_edges = Vec::with_capacity(triangles.len());
        for t in &triangles {
            let mut ce = [0; 3];
            for (i, pair) in TRI_EDGE_VERTICES.iter().enumerate() {
                let (p, q) = (t[pair[0]], t[pair[1]]);
                let key = [p.min(q), p.max(q)];
                let id = *edge_map.entry(key).or_insert_with(|| {
                    edges.push(key);
                    counts.push(0usize);
                    edges.len() - 1
                });
                counts[id] += 1;
                ce[i] = id;
            }
            cell_edges.push(ce);
        }
        if counts.iter().any(|&c| c > 2) {
            return config_err("non-manifold edge");
        }
        let boundary_edge: Vec<bool> = counts.iter().map(|&c| c == 1).collect();
        let mut boundary_vertex = vec![false; vertices.len()];
        for (e, &b) in edges.iter().zip(&boundary_edge) {
            if b {
                boundary_vertex[e[0]] = true;
                boundary_vertex[e[1]] = true;
            }
        }
        Ok(Self { vertices, triangles, edges, cell_edges, boundary_edge, boundary_vertex, tags, grid: None })
    }

    pub fn vertices(&self) -> &[[f64; 2]] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    pub fn cell_edges(&self) -> &[[usize; 3]] {
        &self.cell_edges
    }

    pub fn is_boundary_edge(&self, e: usize) -> bool {
        self.boundary_edge[e]
    }

    pub fn is_boundary_vertex(&self, v: usize) -> bool {
        self.boundary_vertex[v]
    }

    pub fn n_cells(&self) -> usize {
        self.triangles.len()
    }

    pub fn tags(&self) -> &[Region] {
        &self.tags
    }
}

/// `N×N` squares on `(-1, 1)²`, each split along its bottom-left to top-right
/// diagonal. Cells left of `x = 0` are hyperbolic, the others elliptic.
pub fn build_rect_trimesh(n: usize) -> Result<TriMesh> {
    if n == 0 || n % 2 != 0 {
        return config_err(format!("square mesh needs an even, positive N (got {n})"));
    }
    let h = 2.0 / n as f64;
    let coord = |i: usize| if i == n { 1.0 } else { -1.0 + h * i as f64 };
    let mut vertices = Vec::with_capacity((n + 1) * (n + 1));
    for j in 0..=n {
        for i in 0..=n {
            vertices.push([coord(i), coord(j)]);
        }
    }
    let id = |i: usize, j: usize| j * (n + 1) + i;
    let mut triangles = Vec::with_capacity(2 * n * n);
    let mut tags = Vec::with_capacity(2 * n * n);
    for j in 0..n {
        for i in 0..n {
            let region = if i < n / 2 { Region::Hyperbolic } else { Region::Elliptic };
            triangles.push([id(i, j), id(i + 1, j), id(i + 1, j + 1)]);
            triangles.push([id(i, j), id(i + 1, j + 1), id(i, j + 1)]);
            tags.push(region);
            tags.push(region);
        }
    }
    let mut mesh = TriMesh::new(vertices, triangles, tags)?;
    mesh.grid = Some(Grid { n, lo: -1.0, hi: 1.0 });
    Ok(mesh)
}

/// Affine map `x = origin + J x̂` from the reference cell.
#[derive(Debug, Clone, Copy)]
pub struct CellMap {
    pub dim: usize,
    pub origin: [f64; 2],
    pub jac: [[f64; 2]; 2],
    pub det: f64,
    pub inv: [[f64; 2]; 2],
}

impl CellMap {
    pub fn map(&self, xh: [f64; 2]) -> [f64; 2] {
        if self.dim == 1 {
            return [self.origin[0] + self.jac[0][0] * xh[0], 0.0];
        }
        [
            self.origin[0] + self.jac[0][0] * xh[0] + self.jac[0][1] * xh[1],
            self.origin[1] + self.jac[1][0] * xh[0] + self.jac[1][1] * xh[1],
        ]
    }

    pub fn inverse_map(&self, x: [f64; 2]) -> [f64; 2] {
        let d = [x[0] - self.origin[0], x[1] - self.origin[1]];
        if self.dim == 1 {
            return [self.inv[0][0] * d[0], 0.0];
        }
        [
            self.inv[0][0] * d[0] + self.inv[0][1] * d[1],
            self.inv[1][0] * d[0] + self.inv[1][1] * d[1],
        ]
    }
}

/// A mesh of either supported dimension.
#[derive(Debug, Clone)]
pub enum Mesh {
    Interval(IntervalMesh),
    Triangle(TriMesh),
}

impl From<IntervalMesh> for Mesh {
    fn from(m: IntervalMesh) -> Self {
        Mesh::Interval(m)
    }
}

impl From<TriMesh> for Mesh {
    fn from(m: TriMesh) -> Self {
        Mesh::Triangle(m)
    }
}

impl Mesh {
    pub fn dim(&self) -> usize {
        match self {
            Mesh::Interval(_) => 1,
            Mesh::Triangle(_) => 2,
        }
    }

    pub fn n_cells(&self) -> usize {
        match self {
            Mesh::Interval(m) => m.n_cells(),
            Mesh::Triangle(m) => m.n_cells(),
        }
    }

    pub fn tag(&self, cell: usize) -> Region {
        match self {
            Mesh::Interval(m) => m.tags[cell],
            Mesh::Triangle(m) => m.tags[cell],
        }
    }

    pub fn cell_map(&self, cell: usize) -> CellMap {
        match self {
            Mesh::Interval(m) => {
                let (a, b) = (m.vertices[cell], m.vertices[cell + 1]);
                let h = b - a;
                CellMap { dim: 1, origin: [a, 0.0], jac: [[h, 0.0], [0.0, 1.0]], det: h, inv: [[1.0 / h, 0.0], [0.0, 1.0]] }
            }
            Mesh::Triangle(m) => {
                let [a, b, c] = m.triangles[cell].map(|i| m.vertices[i]);
                let jac = [[b[0] - a[0], c[0] - a[0]], [b[1] - a[1], c[1] - a[1]]];
                let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
                let inv = [[jac[1][1] / det, -jac[0][1] / det], [-jac[1][0] / det, jac[0][0] / det]];
                CellMap { dim: 2, origin: a, jac, det, inv }
            }
        }
    }

    pub fn centroid(&self, cell: usize) -> [f64; 2] {
        match self {
            Mesh::Interval(m) => [0.5 * (m.vertices[cell] + m.vertices[cell + 1]), 0.0],
            Mesh::Triangle(m) => {
                let [a, b, c] = m.triangles[cell].map(|i| m.vertices[i]);
                [(a[0] + b[0] + c[0]) / 3.0, (a[1] + b[1] + c[1]) / 3.0]
            }
        }
    }

    /// Cell containing `x` and the reference coordinates of `x` in it.
    pub fn locate(&self, x: &[f64]) -> Option<(usize, [f64; 2])> {
        const TOL: f64 = 1e-12;
        match self {
            Mesh::Interval(m) => {
                let p = x[0];
                if p < m.a - TOL || p > m.b + TOL {
                    return None;
                }
                let h = (m.b - m.a) / m.n_cells() as f64;
                let cell = (((p - m.a) / h).floor().max(0.0) as usize).min(m.n_cells() - 1);
                let xh = self.cell_map(cell).inverse_map([p, 0.0]);
                Some((cell, xh))
            }
            Mesh::Triangle(m) => {
                let p = [x[0], x[1]];
                let inside = |cell: usize| {
                    let xh = self.cell_map(cell).inverse_map(p);
                    (xh[0] >= -TOL && xh[1] >= -TOL && xh[0] + xh[1] <= 1.0 + TOL).then_some((cell, xh))
                };
                if let Some(g) = m.grid {
                    if p.iter().any(|&c| c < g.lo - TOL || c > g.hi + TOL) {
                        return None;
                    }
                    let h = (g.hi - g.lo) / g.n as f64;
                    let i = (((p[0] - g.lo) / h).floor().max(0.0) as usize).min(g.n - 1);
                    let j = (((p[1] - g.lo) / h).floor().max(0.0) as usize).min(g.n - 1);
                    let base = 2 * (j * g.n + i);
                    return inside(base).or_else(|| inside(base + 1));
                }
                (0..m.n_cells()).find_map(inside)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn interval_vertices() {
        let m = build_interval_mesh(0.0, 1.0, 2).unwrap();
        assert_eq!(m.vertices(), &[0.0, 0.5, 1.0]);
        assert!(build_interval_mesh(0.0, 1.0, 0).is_err());
        assert!(build_interval_mesh(1.0, 1.0, 3).is_err());
    }

    #[test]
    fn interval_contains_piece_boundaries() {
        let m = build_interval_mesh(-1.5 * PI, 1.5 * PI, 192).unwrap();
        for target in [0.0, 0.5 * PI, -0.5 * PI, PI] {
            assert!(m.vertices().iter().any(|v| (v - target).abs() < 1e-12), "{target} missing");
        }
    }

    #[test]
    fn square_mesh_counts_and_tags() {
        let m = build_rect_trimesh(2).unwrap();
        assert_eq!(m.n_cells(), 8);
        assert_eq!(m.vertices().len(), 9);
        assert_eq!(m.edges().len(), 16);
        let m16 = build_rect_trimesh(16).unwrap();
        let hyp = m16.tags().iter().filter(|&&t| t == Region::Hyperbolic).count();
        let ell = m16.tags().iter().filter(|&&t| t == Region::Elliptic).count();
        assert_eq!(hyp + ell, m16.n_cells());
        assert_eq!(hyp, ell);
        let mesh = Mesh::from(m16);
        for c in 0..mesh.n_cells() {
            let x = mesh.centroid(c)[0];
            assert_eq!(mesh.tag(c) == Region::Hyperbolic, x < 0.0);
            assert!(mesh.cell_map(c).det > 0.0);
        }
        assert!(build_rect_trimesh(3).is_err());
    }

    #[test]
    fn locate_points() {
        let mesh = Mesh::from(build_rect_trimesh(4).unwrap());
        for p in [[0.1, 0.2], [-0.99, 0.99], [1.0, 1.0], [0.0, 0.0]] {
            let (c, xh) = mesh.locate(&p).unwrap();
            let back = mesh.cell_map(c).map(xh);
            assert!((back[0] - p[0]).abs() < 1e-12 && (back[1] - p[1]).abs() < 1e-12);
        }
        assert!(mesh.locate(&[1.5, 0.0]).is_none());
        let line = Mesh::from(build_interval_mesh(0.0, 1.0, 4).unwrap());
        assert_eq!(line.locate(&[0.3]).unwrap().0, 1);
        assert!(line.locate(&[-0.1]).is_none());
    }
}
