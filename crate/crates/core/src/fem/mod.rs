//! Spatial discretization: meshes, conforming spaces and assembly.

mod assembly;
mod cell_quadrature;
mod element;
mod mesh;
mod space;
mod sparse;

pub use assembly::{
    assemble_coupling, assemble_load, assemble_weighted_mass, mass_with_sampler, BlockOperator, SpaceSampler,
};
pub use cell_quadrature::CellQuadrature;
pub use element::{DofSite, RefElement, ShapeTable};
pub use mesh::{build_interval_mesh, build_rect_trimesh, CellMap, Indicator, IntervalMesh, Mesh, Region, TriMesh};
pub use space::{CompositeSpace, FeSpace, PointValue, SpaceKind};
pub use sparse::CsrMatrix;
