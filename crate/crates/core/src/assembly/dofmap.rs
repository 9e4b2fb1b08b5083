//! Global numbering of the discrete spaces.
//!
//! Layout of `Σ_h`: vertex DOFs `3v + c`, then per edge a block of
//! `ℓ-1` normal-moment DOFs followed by `ℓ` shear DOFs, then per cell the
//! interior DOFs. In the hybrid space the edge blocks hold only the normal
//! moments and each cell block starts with its `3ℓ` cell-local shear DOFs.

use crate::element::{Anchor, DivDivElement, DofFunctional, DofKind, HermiteElement};
use crate::mesh::TriMesh;
use crate::polyalg::dim_p;

/// Local-to-global map of one cell: `(global index, factor)` per local DOF,
/// where the global basis function restricted to the cell is
/// `factor · φ_local`.
pub type CellMap = Vec<(usize, f64)>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SigmaSpace {
    Conforming,
    Hybrid,
}

#[derive(Clone, Debug)]
pub struct GlobalDofMap {
    pub l: usize,
    pub k: usize,
    pub space: SigmaSpace,
    pub n_sigma: usize,
    pub n_q: usize,
    pub n_lambda: usize,
    /// Dimension of `P_{k-2}(K)`.
    pub q_per_cell: usize,
    pub sigma: Vec<CellMap>,
    /// Offset of each interior edge's multiplier block (hybrid only).
    pub lambda_offset: Vec<Option<usize>>,
}

impl GlobalDofMap {
    pub fn q_range(&self, cell: usize) -> std::ops::Range<usize> {
        cell * self.q_per_cell..(cell + 1) * self.q_per_cell
    }

    /// `dim Σ_h + dim Q_h (+ dim Λ_h)`.
    pub fn n_total(&self) -> usize {
        self.n_sigma + self.n_q + self.n_lambda
    }
}

/// Closed-form `dim Σ_h = 3#V + (2ℓ-1)#E + ℓ(ℓ-1)#T + ½(k+2)(k-3)#T`.
pub fn sigma_dimension_formula(mesh: &TriMesh, l: usize, k: usize) -> usize {
    3 * mesh.num_vertices()
        + (2 * l - 1) * mesh.num_edges()
        + l * (l - 1) * mesh.num_cells()
        + (k + 2) * (k - 3) / 2 * mesh.num_cells()
}

fn local_counts(l: usize, k: usize) -> (usize, usize) {
    let c = DivDivElement::entity_counts(l, k);
    (c.per_edge, c.per_cell)
}

/// Numbers `Σ_h` (or `Σ̃_h`), `Q_h` and, for the hybrid space, `Λ_h`.
/// `dofs` is the local DOF list of any element of the family; the
/// orientation signs come from the mesh.
pub fn build_dof_map(
    mesh: &TriMesh,
    l: usize,
    k: usize,
    dofs: &[DofFunctional],
    space: SigmaSpace,
) -> GlobalDofMap {
    let (per_edge, n_int) = local_counts(l, k);
    let nv = mesh.num_vertices();
    let ne = mesh.num_edges();
    let nt = mesh.num_cells();
    let edge_block = match space {
        SigmaSpace::Conforming => per_edge,
        SigmaSpace::Hybrid => l - 1,
    };
    let cell_block = match space {
        SigmaSpace::Conforming => n_int,
        SigmaSpace::Hybrid => 3 * l + n_int,
    };
    let off_e = 3 * nv;
    let off_c = off_e + ne * edge_block;
    let n_sigma = off_c + nt * cell_block;

    let mut sigma = Vec::with_capacity(nt);
    for c in 0..nt {
        let verts = mesh.cells()[c];
        let edges = mesh.cell_edges(c);
        let map = dofs
            .iter()
            .enumerate()
            .map(|(i, d)| {
                let mut d = *d;
                if let Anchor::Edge(e) = d.anchor {
                    d.orientation = edges[e].1;
                }
                match (d.anchor, d.kind) {
                    (Anchor::Vertex(v), DofKind::VertexValue { component }) => {
                        (3 * verts[v] + component, 1.0)
                    }
                    (Anchor::Edge(e), DofKind::EdgeNN { moment }) => {
                        (off_e + edges[e].0 * edge_block + moment, d.global_factor())
                    }
                    (Anchor::Edge(e), DofKind::EdgeShear { moment }) => match space {
                        SigmaSpace::Conforming => (
                            off_e + edges[e].0 * edge_block + (l - 1) + moment,
                            d.global_factor(),
                        ),
                        SigmaSpace::Hybrid => (off_c + c * cell_block + e * l + moment, 1.0),
                    },
                    (Anchor::Cell, _) => {
                        let first_interior = 9 + 3 * per_edge;
                        let m = i - first_interior;
                        let base = match space {
                            SigmaSpace::Conforming => 0,
                            SigmaSpace::Hybrid => 3 * l,
                        };
                        (off_c + c * cell_block + base + m, 1.0)
                    }
                    _ => unreachable!("unexpected DOF {d}"),
                }
            })
            .collect();
        sigma.push(map);
    }

    let q_per_cell = dim_p(k - 2);
    let mut lambda_offset = vec![None; ne];
    let mut n_lambda = 0;
    if space == SigmaSpace::Hybrid {
        for (e, slot) in lambda_offset.iter_mut().enumerate() {
            if !mesh.is_boundary_edge(e) {
                *slot = Some(n_lambda);
                n_lambda += l;
            }
        }
    }
    GlobalDofMap {
        l,
        k,
        space,
        n_sigma,
        n_q: q_per_cell * nt,
        n_lambda,
        q_per_cell,
        sigma,
        lambda_offset,
    }
}

/// Numbering of the vector Hermite space `V_h`.
#[derive(Clone, Debug)]
pub struct HermiteDofMap {
    pub l: usize,
    pub n_v: usize,
    pub cells: Vec<CellMap>,
}

pub fn build_hermite_map(mesh: &TriMesh, l: usize) -> HermiteDofMap {
    let counts = HermiteElement::entity_counts(l);
    let off_e = 6 * mesh.num_vertices();
    let off_c = off_e + counts.per_edge * mesh.num_edges();
    let n_v = off_c + counts.per_cell * mesh.num_cells();
    let per_edge_comp = l - 2;
    let n_int = dim_p(l - 2);
    let mut cells = Vec::with_capacity(mesh.num_cells());
    for c in 0..mesh.num_cells() {
        let verts = mesh.cells()[c];
        let edges = mesh.cell_edges(c);
        let mut map = Vec::with_capacity(HermiteElement::dimension(l));
        for &v in &verts {
            for slot in 0..6 {
                map.push((6 * v + slot, 1.0));
            }
        }
        for &(e, sign) in &edges {
            for comp in 0..2 {
                for j in 0..per_edge_comp {
                    let f = if sign < 0 && j % 2 == 1 { -1.0 } else { 1.0 };
                    map.push((off_e + e * counts.per_edge + comp * per_edge_comp + j, f));
                }
            }
        }
        for comp in 0..2 {
            for m in 0..n_int {
                map.push((off_c + c * counts.per_cell + comp * n_int + m, 1.0));
            }
        }
        cells.push(map);
    }
    HermiteDofMap { l, n_v, cells }
}

/// Closed-form `dim V_h = 6#V + 2(ℓ-2)#E + ℓ(ℓ-1)#T`.
pub fn hermite_dimension_formula(mesh: &TriMesh, l: usize) -> usize {
    6 * mesh.num_vertices() + 2 * (l - 2) * mesh.num_edges() + l * (l - 1) * mesh.num_cells()
}
