//! Local postprocessing `u_h*` of degree `min{ℓ,k}+2`.
//!
//! On each cell `u*` minimises `‖∇²u* + σ_h‖_K` subject to
//! `(u*, p)_K = (u_h, p)_K` for `p ∈ P₁(K)`.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::assembly::Discretization;
use crate::error::Result;
use crate::linalg::{equilibrated_inverse, MAX_DOF_CONDITION};
use crate::polyalg::{dim_p, hess, scalar_inner, sym_inner, Poly2D, SymTensorPoly2D};

use super::norms::PiecewisePoly;
use super::solve::Solution;

/// Degree of the postprocessed function.
pub fn ustar_degree(l: usize, k: usize) -> usize {
    l.min(k) + 2
}

/// Solves the local problem on one cell for given `σ_h|_K` and `u_h|_K`.
pub fn postprocess_cell(
    tri: &crate::geometry::Triangle,
    degree: usize,
    sigma: &SymTensorPoly2D,
    u: &Poly2D,
) -> Result<Poly2D> {
    let frame = tri.frame();
    let n = dim_p(degree);
    let basis: Vec<Poly2D> = (0..n).map(|i| Poly2D::basis(frame, i)).collect();
    let hs: Vec<SymTensorPoly2D> = basis.iter().map(hess).collect();
    let mut a = DMatrix::zeros(n + 3, n + 3);
    let mut rhs = DVector::zeros(n + 3);
    for i in 0..n {
        for j in i..n {
            let v = sym_inner(&hs[i], &hs[j], tri);
            a[(i, j)] = v;
            a[(j, i)] = v;
        }
        rhs[i] = -sym_inner(sigma, &hs[i], tri);
    }
    for c in 0..3 {
        let p = &basis[c];
        for j in 0..n {
            let v = scalar_inner(&basis[j], p, tri);
            a[(n + c, j)] = v;
            a[(j, n + c)] = v;
        }
        rhs[n + c] = scalar_inner(u, p, tri);
    }
    let (inv, _) = equilibrated_inverse(&a, "local postprocessing system", MAX_DOF_CONDITION)?;
    let x = inv * rhs;
    Ok(Poly2D::from_coeffs(frame, degree, x.as_slice()[..n].to_vec()))
}

/// `u_h*` on every cell.
pub fn postprocess_ustar(disc: &Discretization, sol: &Solution) -> Result<PiecewisePoly> {
    let degree = ustar_degree(disc.l, disc.k);
    let cells: Result<Vec<Poly2D>> = (0..disc.mesh.num_cells())
        .into_par_iter()
        .map(|c| {
            postprocess_cell(
                &disc.mesh.triangle(c),
                degree,
                &sol.sigma_on_cell(disc, c),
                &sol.u_on_cell(disc, c),
            )
        })
        .collect();
    Ok(PiecewisePoly { cells: cells? })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Point, Triangle};

    #[test]
    fn recovers_polynomial_from_its_hessian_and_low_moments() {
        let tri = Triangle::new(Point::new(0.1, 0.2), Point::new(0.6, 0.25), Point::new(0.3, 0.7));
        let fr = tri.frame();
        let p = Poly2D::from_coeffs(fr, 5, (0..dim_p(5)).map(|i| ((i * 7 % 11) as f64 - 5.0) / 3.0).collect());
        let sigma = hess(&p).scaled(-1.0);
        let u = postprocess_cell(&tri, 5, &sigma, &p).unwrap();
        assert!((&u - &p).max_abs_coeff() < 1e-9);
    }

    #[test]
    fn zero_data_gives_zero() {
        let tri = Triangle::reference();
        let fr = tri.frame();
        let u = postprocess_cell(&tri, 5, &SymTensorPoly2D::zero(fr, 3), &Poly2D::zero(fr, 1)).unwrap();
        assert_eq!(u.max_abs_coeff(), 0.0);
    }
}
