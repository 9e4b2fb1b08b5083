//! Discrete inf-sup condition: the explicit stress witness for a given
//! `v_h ∈ Q_h` and dense estimates of the inf-sup constants.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::assembly::{assemble_mixed, default_quad_degree, Discretization};
use crate::error::{Error, Result};
use crate::fields::FnScalar;
use crate::polyalg::{hess, sym_inner};
use crate::quadrature::{gauss_01, points_for_degree};

/// Signed sum `Σ_{K ∋ e} s_K w_K` over the cells of an edge, where `s_K = 1`
/// when the global normal of `e` points out of `K`.
fn edge_cells_signed(disc: &Discretization, e: usize) -> Vec<(usize, usize, f64)> {
    let mesh = disc.mesh;
    mesh.edge_cells(e)
        .iter()
        .flatten()
        .map(|&c| {
            let (i, &(_, s)) = mesh
                .cell_edges(c)
                .iter()
                .enumerate()
                .find(|(_, (ee, _))| *ee == e)
                .expect("edge not in its cell");
            (c, i, f64::from(s))
        })
        .collect()
}

/// The stress `τ_h ∈ Σ_h` with `(div div τ_h, v_h) = |v_h|²_{2,h}`:
/// vertex values zero, normal-normal moments of `-h_e⁻¹[∂_n v_h]`, shear
/// moments of `h_e⁻³[v_h]`, interior Hessian moments of `∇²v_h`, and the
/// remaining interior DOFs zero.
pub fn inf_sup_witness(disc: &Discretization, v: &[f64]) -> Vec<f64> {
    let mesh = disc.mesh;
    let map = &disc.conforming;
    let l = disc.l;
    let mut tau = vec![0.0; map.n_sigma];
    let rule = gauss_01(points_for_degree(disc.k + l));
    let legendre: Vec<_> = (0..l).map(crate::polyalg::shifted_legendre).collect();
    for e in 0..mesh.num_edges() {
        let seg = mesh.segment(e);
        let n = mesh.edge_normal(e);
        let he = seg.length();
        let cells = edge_cells_signed(disc, e);
        let polys: Vec<_> = cells.iter().map(|&(c, _, s)| (disc.u_on_cell(v, c), s)).collect();
        let mut nn = vec![0.0; l - 1];
        let mut sh = vec![0.0; l];
        for &(t, w) in rule {
            let p = seg.at(t);
            let (mut jv, mut jn) = (0.0, 0.0);
            for (q, s) in &polys {
                let jet = q.jet(p);
                jv += s * jet.value;
                jn += s * (jet.grad[0] * n.x + jet.grad[1] * n.y);
            }
            for j in 0..l {
                let lj = legendre[j].eval(t);
                if j + 1 < l {
                    nn[j] += w * jn * lj;
                }
                sh[j] += w * jv * lj;
            }
        }
        // Global DOFs are read through the first cell's map; the factor
        // converts the cell-local functional to the global one.
        let (c, i, _) = cells[0];
        let el = &disc.elements[c];
        for (j, v) in nn.iter().enumerate().take(l - 1) {
            let (g, _) = map.sigma[c][el.edge_nn_dof(i, j)];
            tau[g] = -v / he;
        }
        for (j, v) in sh.iter().enumerate().take(l) {
            let (g, _) = map.sigma[c][el.edge_shear_dof(i, j)];
            tau[g] = he * v / he.powi(3);
        }
    }
    for c in 0..mesh.num_cells() {
        let el = &disc.elements[c];
        let tri = el.triangle();
        let hv = hess(&disc.u_on_cell(v, c));
        for m in 0..el.num_interior_hess() {
            let (g, f) = map.sigma[c][el.interior_dof(m)];
            tau[g] = f * sym_inner(&hv, &el.interior_tests()[m], tri) / tri.area();
        }
    }
    tau
}

/// Gram matrix of `|·|_{2,h}` on `Q_h` in the orthonormal basis.
pub fn gram_2h(disc: &Discretization) -> DMatrix<f64> {
    let mesh = disc.mesh;
    let map = &disc.conforming;
    let nq = map.q_per_cell;
    let mut w = DMatrix::zeros(map.n_q, map.n_q);
    for c in 0..mesh.num_cells() {
        let tri = mesh.triangle(c);
        let hs: Vec<_> = disc.qbasis[c].iter().map(hess).collect();
        let r = map.q_range(c).start;
        for a in 0..nq {
            for b in 0..nq {
                w[(r + a, r + b)] += sym_inner(&hs[a], &hs[b], &tri);
            }
        }
    }
    let rule = gauss_01(points_for_degree(2 * disc.k));
    for e in 0..mesh.num_edges() {
        let seg = mesh.segment(e);
        let n = mesh.edge_normal(e);
        let he = seg.length();
        let cells = edge_cells_signed(disc, e);
        for &(t, wt) in rule {
            let p = seg.at(t);
            let mut vals = Vec::new();
            for &(c, _, s) in &cells {
                let r = map.q_range(c).start;
                for (a, q) in disc.qbasis[c].iter().enumerate() {
                    let jet = q.jet(p);
                    vals.push((r + a, s * jet.value, s * (jet.grad[0] * n.x + jet.grad[1] * n.y)));
                }
            }
            for &(i, vi, di) in &vals {
                for &(j, vj, dj) in &vals {
                    w[(i, j)] += wt * he * (vi * vj / he.powi(3) + di * dj / he);
                }
            }
        }
    }
    w
}

/// Dense estimates of the discrete inf-sup constants.
#[derive(Clone, Copy, Debug)]
pub struct InfSupConstants {
    /// `inf_v sup_τ (div div τ, v) / (‖τ‖₀ ‖v‖₀)`: smallest singular value of
    /// `B` on the `M`-orthogonal complement of its kernel.
    pub sigma_min_l2: f64,
    /// Same with `‖τ‖_{H(div div)}` in the denominator.
    pub beta_hdd: f64,
    /// `inf_v sup_τ (div div τ, v) / (‖τ‖₀ |v|_{2,h})`.
    pub beta_2h: f64,
}

fn lambda_min(m: DMatrix<f64>) -> f64 {
    SymmetricEigen::new(m).eigenvalues.min()
}

pub fn inf_sup_constants(disc: &Discretization) -> Result<InfSupConstants> {
    let sys = assemble_mixed(disc, &FnScalar(|_| 0.0), default_quad_degree(disc.l))?;
    let m = sys.mass.to_dense();
    let b = sys.divdiv.to_dense();
    let chol = |a: DMatrix<f64>, what: &str| {
        a.cholesky()
            .ok_or_else(|| Error::Solver(format!("{what} is not positive definite")))
    };
    let bt = b.transpose();
    let s_l2 = &b * chol(m.clone(), "mass matrix")?.solve(&bt);
    let n = &m + &bt * &b;
    let s_hdd = &b * chol(n, "H(div div) Gram matrix")?.solve(&bt);
    let lw = chol(gram_2h(disc), "mesh-dependent Gram matrix")?.l();
    let linv = lw
        .try_inverse()
        .ok_or_else(|| Error::Solver("singular Cholesky factor".into()))?;
    let s_2h = &linv * &s_l2 * linv.transpose();
    let sym = |a: DMatrix<f64>| (&a + a.transpose()) * 0.5;
    Ok(InfSupConstants {
        sigma_min_l2: lambda_min(sym(s_l2)).max(0.0).sqrt(),
        beta_hdd: lambda_min(sym(s_hdd)).max(0.0).sqrt(),
        beta_2h: lambda_min(sym(s_2h)).max(0.0).sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::biharmonic::norms::{norm_2h, PiecewisePoly};
    use crate::mesh::structured_unit_square;

    #[test]
    fn witness_realises_the_mesh_dependent_norm() {
        let mesh = structured_unit_square(2).unwrap();
        for (l, k) in [(3, 3), (2, 3), (4, 4)] {
            let disc = Discretization::new(&mesh, l, k).unwrap();
            let v: Vec<f64> = (0..disc.conforming.n_q).map(|i| ((i * 37 % 17) as f64 - 8.0) / 5.0).collect();
            let tau = inf_sup_witness(&disc, &v);
            let sys = assemble_mixed(&disc, &FnScalar(|_| 0.0), default_quad_degree(l)).unwrap();
            let btau = sys.divdiv.mul_vec(&tau);
            let lhs: f64 = btau.iter().zip(&v).map(|(a, b)| a * b).sum();
            let pw = PiecewisePoly {
                cells: (0..mesh.num_cells()).map(|c| disc.u_on_cell(&v, c)).collect(),
            };
            let rhs = norm_2h(&mesh, &pw, 2 * k).powi(2);
            assert!((lhs - rhs).abs() < 1e-8 * rhs, "l={l} k={k}: {lhs} vs {rhs}");
            let vw: f64 = {
                let w = gram_2h(&disc);
                let x = nalgebra::DVector::from_column_slice(&v);
                (x.transpose() * w * &x)[(0, 0)]
            };
            assert!((vw - rhs).abs() < 1e-10 * rhs);
        }
    }
}
