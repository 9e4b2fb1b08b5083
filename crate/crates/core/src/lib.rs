//! Div-div conforming finite elements for symmetric tensors on triangles,
//! their discrete complexes, and a mixed solver for the biharmonic equation.

pub mod assembly;
pub mod biharmonic;
pub mod complexes;
pub mod element;
pub mod error;
pub mod fields;
pub mod geometry;
pub mod linalg;
pub mod mesh;
pub mod polyalg;
pub mod quadrature;
pub mod sparse;

pub use element::{DivDivElement, DofFunctional, DofKind, HermiteElement, RotRotElement};
pub use error::{Error, Result};
pub use geometry::{Point, Segment, Triangle};
pub use mesh::{mesh_from_spec, structured_unit_square, TriMesh};
pub use polyalg::{Frame, Poly1D, Poly2D, SymTensorPoly2D, VectorPoly2D};

/// Library version, recorded in study manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
