//! Global finite element spaces: dof numbering, Piola/affine mapping,
//! canonical interpolation and point evaluation.

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use super::element::{DofSite, RefElement, ShapeTable};
use super::mesh::{CellMap, Mesh, TRI_EDGE_VERTICES};
use crate::error::{config_err, Error, Result};

/// Kind of a conforming space. Further kinds (e.g. curl-conforming edge
/// elements) slot in here together with their reference element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[non_exhaustive]
pub enum SpaceKind {
    /// Continuous `P_k`, optionally with homogeneous Dirichlet conditions
    /// eliminated from the numbering.
    Lagrange { k: usize, dirichlet: bool },
    /// `RT_order` (normal-continuous), triangles only.
    RaviartThomas { order: usize },
}

/// Value and first derivative of a discrete field (or basis function) at a
/// point. Scalars use `value[0]` and store the gradient in `deriv`; vector
/// fields store their divergence in `deriv[0]`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PointValue {
    pub value: [f64; 2],
    pub deriv: [f64; 2],
}

/// A conforming finite element space on a mesh.
#[derive(Debug, Clone)]
pub struct FeSpace {
    kind: SpaceKind,
    mesh: Arc<Mesh>,
    element: RefElement,
    n_local: usize,
    dofs: Vec<Option<usize>>,
    signs: Vec<f64>,
    n_dofs: usize,
}

#[derive(Hash, PartialEq, Eq, Clone, Copy)]
enum Entity {
    Vertex(usize),
    Edge(usize, usize),
    Cell(usize, usize),
}

impl FeSpace {
    pub fn new(mesh: Arc<Mesh>, kind: SpaceKind) -> Result<Self> {
        let element = match (kind, mesh.as_ref()) {
            (SpaceKind::Lagrange { k, .. }, Mesh::Interval(_)) => RefElement::lagrange_interval(k)?,
            (SpaceKind::Lagrange { k, .. }, Mesh::Triangle(_)) => RefElement::lagrange_triangle(k)?,
            (SpaceKind::RaviartThomas { order }, Mesh::Triangle(_)) => RefElement::raviart_thomas(order)?,
            (SpaceKind::RaviartThomas { .. }, Mesh::Interval(_)) => {
                return config_err("Raviart-Thomas spaces need a triangle mesh")
            }
        };
        let sites = element.dof_sites();
        let n_local = sites.len();
        let n_cells = mesh.n_cells();
        let mut dofs = Vec::with_capacity(n_cells * n_local);
        let mut signs = Vec::with_capacity(n_cells * n_local);
        let mut numbering: HashMap<Entity, Option<usize>> = HashMap::new();
        let mut next = 0usize;
        for cell in 0..n_cells {
            for &site in &sites {
                let (entity, sign, constrained) = Self::resolve(kind, &mesh, cell, site);
                let id = *numbering.entry(entity).or_insert_with(|| {
                    if constrained {
                        None
                    } else {
                        next += 1;
                        Some(next - 1)
                    }
                });
                dofs.push(id);
                signs.push(sign);
            }
        }
        Ok(Self { kind, mesh, element, n_local, dofs, signs, n_dofs: next })
    }

    /// Global entity, orientation sign and Dirichlet flag of a local dof.
    fn resolve(kind: SpaceKind, mesh: &Mesh, cell: usize, site: DofSite) -> (Entity, f64, bool) {
        let dirichlet = matches!(kind, SpaceKind::Lagrange { dirichlet: true, .. });
        match mesh {
            Mesh::Interval(m) => match site {
                DofSite::Vertex(i) => {
                    let v = cell + i;
                    (Entity::Vertex(v), 1.0, dirichlet && (v == 0 || v == m.n_cells()))
                }
                DofSite::Interior(j) => (Entity::Cell(cell, j), 1.0, false),
                DofSite::Edge(..) => unreachable!("interval elements have no edge dofs"),
            },
            Mesh::Triangle(m) => {
                let tri = m.triangles()[cell];
                match site {
                    DofSite::Vertex(i) => {
                        let v = tri[i];
                        (Entity::Vertex(v), 1.0, dirichlet && m.is_boundary_vertex(v))
                    }
                    DofSite::Interior(j) => (Entity::Cell(cell, j), 1.0, false),
                    DofSite::Edge(e, j) => {
                        let edge = m.cell_edges()[cell][e];
                        let [a, b] = TRI_EDGE_VERTICES[e];
                        let aligned = tri[a] < tri[b];
                        match kind {
                            SpaceKind::Lagrange { k, .. } => {
                                let g = if aligned { j } else { k - j };
                                (Entity::Edge(edge, g), 1.0, dirichlet && m.is_boundary_edge(edge))
                            }
                            SpaceKind::RaviartThomas { .. } => {
                                let sign = if aligned || j % 2 == 1 { 1.0 } else { -1.0 };
                                (Entity::Edge(edge, j), sign, false)
                            }
                        }
                    }
                }
            }
        }
    }

    pub fn kind(&self) -> SpaceKind {
        self.kind
    }

    pub fn mesh(&self) -> &Arc<Mesh> {
        &self.mesh
    }

    pub fn element(&self) -> &RefElement {
        &self.element
    }

    pub fn n_dofs(&self) -> usize {
        self.n_dofs
    }

    pub fn n_local(&self) -> usize {
        self.n_local
    }

    /// Number of field components (1 for scalars, 2 for vector fields).
    pub fn n_components(&self) -> usize {
        if self.element.is_vector() {
            2
        } else {
            1
        }
    }

    pub fn is_vector(&self) -> bool {
        self.element.is_vector()
    }

    /// Global dof indices of a cell (`None` for eliminated boundary dofs).
    pub fn cell_dofs(&self, cell: usize) -> &[Option<usize>] {
        &self.dofs[cell * self.n_local..(cell + 1) * self.n_local]
    }

    pub fn cell_signs(&self, cell: usize) -> &[f64] {
        &self.signs[cell * self.n_local..(cell + 1) * self.n_local]
    }

    /// Maps reference shape data to physical basis data of `cell`, including
    /// orientation signs.
    pub fn map_table(&self, cell: usize, map: &CellMap, table: &ShapeTable) -> Vec<PointValue> {
        let signs = self.cell_signs(cell);
        let j = map.jac;
        let inv = map.inv;
        table
            .value
            .iter()
            .zip(&table.deriv)
            .zip(signs)
            .map(|((v, d), &s)| {
                if self.element.is_vector() {
                    let det = map.det;
                    PointValue {
                        value: [
                            s * (j[0][0] * v[0] + j[0][1] * v[1]) / det,
                            s * (j[1][0] * v[0] + j[1][1] * v[1]) / det,
                        ],
                        deriv: [s * d[0] / det, 0.0],
                    }
                } else if map.dim == 1 {
                    PointValue { value: [v[0], 0.0], deriv: [d[0] * inv[0][0], 0.0] }
                } else {
                    // J^{-T} ∇̂
                    PointValue {
                        value: [v[0], 0.0],
                        deriv: [inv[0][0] * d[0] + inv[1][0] * d[1], inv[0][1] * d[0] + inv[1][1] * d[1]],
                    }
                }
            })
            .collect()
    }

    /// Evaluates `coeffs` at reference point `xh` of `cell`.
    pub fn evaluate_in_cell(&self, coeffs: &[f64], cell: usize, xh: [f64; 2]) -> PointValue {
        let map = self.mesh.cell_map(cell);
        let basis = self.map_table(cell, &map, &self.element.eval(xh));
        let mut out = PointValue::default();
        for (b, dof) in basis.iter().zip(self.cell_dofs(cell)) {
            if let Some(d) = dof {
                let c = coeffs[*d];
                for i in 0..2 {
                    out.value[i] += c * b.value[i];
                    out.deriv[i] += c * b.deriv[i];
                }
            }
        }
        out
    }

    /// Evaluates `coeffs` at a physical point.
    pub fn evaluate(&self, coeffs: &[f64], x: &[f64]) -> Result<PointValue> {
        let (cell, xh) = self.mesh.locate(x).ok_or_else(|| Error::OutsideMesh(x.to_vec()))?;
        Ok(self.evaluate_in_cell(coeffs, cell, xh))
    }

    /// Canonical (dof) interpolation of `f(x, cell_centroid)`. The centroid
    /// lets piecewise data pick the branch belonging to the cell.
    pub fn interpolate(&self, f: &dyn Fn([f64; 2], [f64; 2]) -> [f64; 2]) -> Result<Vec<f64>> {
        let mut coeffs = vec![0.0; self.n_dofs];
        for cell in 0..self.mesh.n_cells() {
            let map = self.mesh.cell_map(cell);
            let hint = self.mesh.centroid(cell);
            let vector = self.element.is_vector();
            let pulled = |xh: [f64; 2]| {
                let v = f(map.map(xh), hint);
                if vector {
                    // v̂ = det J^{-1} v
                    let i = map.inv;
                    [
                        map.det * (i[0][0] * v[0] + i[0][1] * v[1]),
                        map.det * (i[1][0] * v[0] + i[1][1] * v[1]),
                    ]
                } else {
                    v
                }
            };
            let local = self.element.dof_functionals(&pulled);
            if local.iter().any(|v| !v.is_finite()) {
                return Err(Error::Evaluation(format!("non-finite dof value in cell {cell}")));
            }
            for ((value, dof), sign) in local.iter().zip(self.cell_dofs(cell)).zip(self.cell_signs(cell)) {
                if let Some(d) = dof {
                    coeffs[*d] = sign * value;
                }
            }
        }
        Ok(coeffs)
    }
}

/// Product of component spaces with a contiguous dof layout.
#[derive(Debug, Clone)]
pub struct CompositeSpace {
    components: Vec<FeSpace>,
    offsets: Vec<usize>,
}

impl CompositeSpace {
    pub fn new(components: Vec<FeSpace>) -> Self {
        let mut offsets = vec![0];
        for c in &components {
            offsets.push(offsets.last().unwrap() + c.n_dofs());
        }
        Self { components, offsets }
    }

    pub fn n_dofs(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    pub fn components(&self) -> &[FeSpace] {
        &self.components
    }

    pub fn component(&self, c: usize) -> &FeSpace {
        &self.components[c]
    }

    pub fn offset(&self, c: usize) -> usize {
        self.offsets[c]
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.components.iter().map(FeSpace::n_dofs).collect()
    }

    /// Component slices of a composite coefficient vector.
    pub fn split<'a>(&self, x: &'a [f64]) -> Vec<&'a [f64]> {
        (0..self.components.len()).map(|c| &x[self.offsets[c]..self.offsets[c + 1]]).collect()
    }
}
