//! Global spaces and sparse assembly of the mixed and hybridized systems.

mod dofmap;

pub use dofmap::{
    build_dof_map, build_hermite_map, hermite_dimension_formula, sigma_dimension_formula, CellMap,
    GlobalDofMap, HermiteDofMap, SigmaSpace,
};

use std::path::Path;

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::element::{edge_traces, DivDivElement};
use crate::error::{Error, Result};
use crate::fields::{ScalarField, TensorField};
use crate::mesh::TriMesh;
pub use crate::polyalg::orthonormal_basis;
use crate::polyalg::{sym_gram, Poly2D, SymTensorPoly2D};
use crate::quadrature::TriangleQuadrature;
use crate::sparse::CooMatrix;

/// Default quadrature degree for data integrals: `2(ℓ+3) + 4`.
pub fn default_quad_degree(l: usize) -> usize {
    2 * (l + 3) + 4
}

/// The elements of one mesh with their global numbering.
#[derive(Debug)]
pub struct Discretization<'m> {
    pub mesh: &'m TriMesh,
    pub l: usize,
    pub k: usize,
    pub elements: Vec<DivDivElement>,
    /// `L²(K)`-orthonormal basis of `P_{k-2}(K)` per cell.
    pub qbasis: Vec<Vec<Poly2D>>,
    pub conforming: GlobalDofMap,
}

impl<'m> Discretization<'m> {
    pub fn new(mesh: &'m TriMesh, l: usize, k: usize) -> Result<Self> {
        let built: Result<Vec<(DivDivElement, Vec<Poly2D>)>> = (0..mesh.num_cells())
            .into_par_iter()
            .map(|c| {
                let tri = mesh.triangle(c);
                let el = DivDivElement::new(tri, l, k)?
                    .with_orientation(mesh.edge_orientation_signs(c)?);
                Ok((el, orthonormal_basis(&tri, k - 2)?))
            })
            .collect();
        let (elements, qbasis): (Vec<_>, Vec<_>) = built?.into_iter().unzip();
        let conforming = build_dof_map(mesh, l, k, elements[0].dofs(), SigmaSpace::Conforming);
        Ok(Self {
            mesh,
            l,
            k,
            elements,
            qbasis,
            conforming,
        })
    }

    pub fn hybrid_map(&self) -> GlobalDofMap {
        build_dof_map(self.mesh, self.l, self.k, self.elements[0].dofs(), SigmaSpace::Hybrid)
    }

    /// Local coefficients of a global `Σ_h` vector on one cell.
    pub fn local_sigma_coeffs(&self, map: &GlobalDofMap, coeffs: &[f64], cell: usize) -> Vec<f64> {
        map.sigma[cell].iter().map(|&(g, f)| f * coeffs[g]).collect()
    }

    pub fn sigma_on_cell(&self, map: &GlobalDofMap, coeffs: &[f64], cell: usize) -> SymTensorPoly2D {
        self.elements[cell].combine(&self.local_sigma_coeffs(map, coeffs, cell))
    }

    pub fn u_on_cell(&self, coeffs: &[f64], cell: usize) -> Poly2D {
        let basis = &self.qbasis[cell];
        let mut u = Poly2D::zero(basis[0].frame(), self.k - 2);
        for (c, q) in coeffs[self.conforming.q_range(cell)].iter().zip(basis) {
            u.axpy(*c, q);
        }
        u
    }

    /// Global DOF vector of the canonical interpolation `Π_h τ`. Shared DOFs
    /// take the value computed from the first incident cell.
    pub fn interpolate_sigma(&self, map: &GlobalDofMap, tau: &dyn TensorField) -> Result<Vec<f64>> {
        let local: Result<Vec<Vec<f64>>> =
            self.elements.par_iter().map(|el| el.eval_dofs(tau)).collect();
        Ok(self.gather(map, &local?))
    }

    /// Like [`Discretization::interpolate_sigma`] for a polynomial, with the
    /// DOFs computed exactly.
    pub fn interpolate_sigma_poly(&self, map: &GlobalDofMap, tau: &SymTensorPoly2D) -> Vec<f64> {
        let local: Vec<Vec<f64>> = self.elements.par_iter().map(|el| el.eval_dofs_poly(tau)).collect();
        self.gather(map, &local)
    }

    fn gather(&self, map: &GlobalDofMap, local: &[Vec<f64>]) -> Vec<f64> {
        let mut out = vec![0.0; map.n_sigma];
        let mut seen = vec![false; map.n_sigma];
        for (c, vals) in local.iter().enumerate() {
            for (&(g, f), v) in map.sigma[c].iter().zip(vals) {
                if !seen[g] {
                    out[g] = f * v;
                    seen[g] = true;
                }
            }
        }
        out
    }

    /// `Q_h f`: coefficients of the `L²` projection onto `P_{k-2}(T_h)`.
    pub fn project_q(&self, f: &dyn ScalarField, quad_degree: usize) -> Vec<f64> {
        let per_cell: Vec<Vec<f64>> = (0..self.mesh.num_cells())
            .into_par_iter()
            .map(|c| {
                let q = TriangleQuadrature::new(&self.mesh.triangle(c), quad_degree);
                let fv: Vec<f64> = q.points.iter().map(|p| f.value(*p)).collect();
                self.qbasis[c]
                    .iter()
                    .map(|b| {
                        q.points
                            .iter()
                            .zip(&q.weights)
                            .zip(&fv)
                            .map(|((p, w), v)| w * v * b.eval(*p))
                            .sum()
                    })
                    .collect()
            })
            .collect();
        per_cell.concat()
    }
}

/// Element matrices of one cell.
#[derive(Clone, Debug)]
pub struct LocalMatrices {
    /// `(φ_i, φ_j)_K`.
    pub mass: DMatrix<f64>,
    /// `(div div φ_j, q_a)_K`.
    pub divdiv: DMatrix<f64>,
    /// `(f, q_a)_K`.
    pub load: Vec<f64>,
}

pub fn local_matrices(
    disc: &Discretization,
    f: &dyn ScalarField,
    quad_degree: usize,
) -> Vec<LocalMatrices> {
    (0..disc.mesh.num_cells())
        .into_par_iter()
        .map(|c| {
            let el = &disc.elements[c];
            let tri = el.triangle();
            let mass = sym_gram(el.shapes(), tri);
            let qb = &disc.qbasis[c];
            let dd: Vec<Poly2D> = el.shapes().iter().map(|s| s.divdiv()).collect();
            let qr = TriangleQuadrature::new(tri, (el.degree() - 2) + (disc.k - 2));
            let qvals: Vec<Vec<f64>> = qb
                .iter()
                .map(|q| qr.points.iter().map(|p| q.eval(*p)).collect())
                .collect();
            let mut divdiv = DMatrix::zeros(qb.len(), dd.len());
            for (j, d) in dd.iter().enumerate() {
                let dv: Vec<f64> = qr.points.iter().map(|p| d.eval(*p)).collect();
                for a in 0..qb.len() {
                    divdiv[(a, j)] = qr
                        .weights
                        .iter()
                        .zip(&dv)
                        .zip(&qvals[a])
                        .map(|((w, x), y)| w * x * y)
                        .sum();
                }
            }
            let ql = TriangleQuadrature::new(tri, quad_degree);
            let fv: Vec<f64> = ql.points.iter().map(|p| f.value(*p)).collect();
            let load = qb
                .iter()
                .map(|q| {
                    ql.points
                        .iter()
                        .zip(&ql.weights)
                        .zip(&fv)
                        .map(|((p, w), v)| w * v * q.eval(*p))
                        .sum()
                })
                .collect();
            LocalMatrices { mass, divdiv, load }
        })
        .collect()
}

/// The saddle-point system `[[M, Bᵀ], [B, 0]] [σ; u] = [0; F]`.
#[derive(Clone, Debug)]
pub struct MixedSystem {
    pub map: GlobalDofMap,
    pub mass: CooMatrix,
    pub divdiv: CooMatrix,
    pub load: Vec<f64>,
}

/// The hybridized system over `Σ̃_h × Q_h × Λ_h`; `coupling` holds
/// `-Σ_K (shear trace of τ, μ)_{∂K}`.
#[derive(Clone, Debug)]
pub struct HybridSystem {
    pub map: GlobalDofMap,
    pub mass: CooMatrix,
    pub divdiv: CooMatrix,
    pub coupling: CooMatrix,
    pub load: Vec<f64>,
}

fn check_quad_degree(l: usize, quad_degree: usize) -> Result<()> {
    if quad_degree < 2 * (l + 1) {
        return Err(Error::InvalidParameter(format!(
            "load quadrature degree {quad_degree} is below the required {}",
            2 * (l + 1)
        )));
    }
    Ok(())
}

fn scatter(
    disc: &Discretization,
    map: &GlobalDofMap,
    locals: &[LocalMatrices],
) -> (CooMatrix, CooMatrix, Vec<f64>) {
    let mut mass = CooMatrix::new(map.n_sigma, map.n_sigma);
    let mut divdiv = CooMatrix::new(map.n_q, map.n_sigma);
    let mut load = vec![0.0; map.n_q];
    for (c, lm) in locals.iter().enumerate() {
        let cm = &map.sigma[c];
        for (i, &(gi, fi)) in cm.iter().enumerate() {
            for (j, &(gj, fj)) in cm.iter().enumerate() {
                mass.push(gi, gj, fi * fj * lm.mass[(i, j)]);
            }
        }
        let qr = map.q_range(c);
        for (a, row) in qr.clone().enumerate() {
            for (j, &(gj, fj)) in cm.iter().enumerate() {
                divdiv.push(row, gj, fj * lm.divdiv[(a, j)]);
            }
            load[row] += lm.load[a];
        }
    }
    mass.compress();
    divdiv.compress();
    let _ = disc;
    (mass, divdiv, load)
}

pub fn assemble_mixed(disc: &Discretization, f: &dyn ScalarField, quad_degree: usize) -> Result<MixedSystem> {
    check_quad_degree(disc.l, quad_degree)?;
    let locals = local_matrices(disc, f, quad_degree);
    let map = disc.conforming.clone();
    let (mass, divdiv, load) = scatter(disc, &map, &locals);
    Ok(MixedSystem {
        map,
        mass,
        divdiv,
        load,
    })
}

pub fn assemble_hybrid(disc: &Discretization, f: &dyn ScalarField, quad_degree: usize) -> Result<HybridSystem> {
    check_quad_degree(disc.l, quad_degree)?;
    let locals = local_matrices(disc, f, quad_degree);
    let map = disc.hybrid_map();
    let (mass, divdiv, load) = scatter(disc, &map, &locals);
    let coupling = assemble_coupling(disc, &map);
    Ok(HybridSystem {
        map,
        mass,
        divdiv,
        coupling,
        load,
    })
}

/// `-Σ_K ∫_e (∂_t(tᵀτn) + nᵀdiv τ) μ ds` with the cell's outward normal and
/// the multiplier basis `μ_j = L_j` in the global edge parameter.
pub fn assemble_coupling(disc: &Discretization, map: &GlobalDofMap) -> CooMatrix {
    let l = disc.l;
    let mut c = CooMatrix::new(map.n_lambda, map.n_sigma);
    for cell in 0..disc.mesh.num_cells() {
        let el = &disc.elements[cell];
        for (i, &(e, sign)) in disc.mesh.cell_edges(cell).iter().enumerate() {
            let Some(off) = map.lambda_offset[e] else {
                continue;
            };
            let seg = el.triangle().edge(i);
            for (m, phi) in el.shapes().iter().enumerate() {
                let (_, shear) = edge_traces(phi, &seg);
                let (g, f) = map.sigma[cell][m];
                for j in 0..l {
                    let parity = if sign < 0 && j % 2 == 1 { -1.0 } else { 1.0 };
                    let v = -seg.length() * shear.legendre_moment(j) * parity;
                    c.push(off + j, g, f * v);
                }
            }
        }
    }
    c.compress();
    c
}

impl MixedSystem {
    /// The full symmetric indefinite matrix.
    pub fn kkt(&self) -> CooMatrix {
        let n = self.map.n_sigma + self.map.n_q;
        let mut k = CooMatrix::new(n, n);
        k.add_block(&self.mass, 0, 0);
        k.add_block(&self.divdiv.transpose(), 0, self.map.n_sigma);
        k.add_block(&self.divdiv, self.map.n_sigma, 0);
        k
    }

    pub fn rhs(&self) -> Vec<f64> {
        let mut r = vec![0.0; self.map.n_sigma];
        r.extend(&self.load);
        r
    }

    pub fn write_system(&self, path: impl AsRef<Path>) -> Result<()> {
        write_kkt(&self.kkt(), &self.rhs(), path)
    }
}

impl HybridSystem {
    pub fn kkt(&self) -> CooMatrix {
        let (ns, nq) = (self.map.n_sigma, self.map.n_q);
        let n = self.map.n_total();
        let mut k = CooMatrix::new(n, n);
        k.add_block(&self.mass, 0, 0);
        k.add_block(&self.divdiv.transpose(), 0, ns);
        k.add_block(&self.divdiv, ns, 0);
        k.add_block(&self.coupling.transpose(), 0, ns + nq);
        k.add_block(&self.coupling, ns + nq, 0);
        k
    }

    pub fn rhs(&self) -> Vec<f64> {
        let mut r = vec![0.0; self.map.n_sigma];
        r.extend(&self.load);
        r.extend(vec![0.0; self.map.n_lambda]);
        r
    }

    pub fn write_system(&self, path: impl AsRef<Path>) -> Result<()> {
        write_kkt(&self.kkt(), &self.rhs(), path)
    }
}

/// Writes the matrix in coordinate format to `path` and the right-hand
/// side, one value per line, to `path` with `.rhs` appended.
fn write_kkt(k: &CooMatrix, rhs: &[f64], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = std::io::BufWriter::new(std::fs::File::create(path)?);
    k.write_coordinate(file)?;
    let mut s = String::new();
    for v in rhs {
        s.push_str(&format!("{v:.17e}\n"));
    }
    let mut rhs_path = path.as_os_str().to_owned();
    rhs_path.push(".rhs");
    std::fs::write(rhs_path, s)?;
    Ok(())
}
