//! Exact integration of polynomials over triangles and segments.

use nalgebra::DMatrix;

use super::poly::{dim_p, Poly2D};
use super::tensor::SymTensorPoly2D;
use crate::error::{Error, Result};
use crate::geometry::{Segment, Triangle};
use crate::quadrature::{gauss_01, points_for_degree, TriangleQuadrature};

/// `∫_K p`, exact up to round-off.
pub fn integrate_triangle(p: &Poly2D, tri: &Triangle) -> f64 {
    let q = TriangleQuadrature::new(tri, p.degree());
    q.integrate(|x| p.eval(x))
}

/// `∫_e p ds`, exact up to round-off.
pub fn integrate_edge(p: &Poly2D, seg: &Segment) -> f64 {
    let r = p.restrict(seg.a, seg.b);
    r.integral01() * seg.length()
}

/// `L²(K)`-orthonormal basis of `P_m(K)` from the Cholesky factor of the
/// monomial Gram matrix.
pub fn orthonormal_basis(tri: &Triangle, m: usize) -> Result<Vec<Poly2D>> {
    let frame = tri.frame();
    let g = monomial_gram(tri, frame, m);
    let l = g
        .cholesky()
        .ok_or_else(|| Error::Solver("monomial Gram matrix is not positive definite".into()))?
        .l();
    let linv = l
        .try_inverse()
        .ok_or_else(|| Error::Solver("singular Cholesky factor".into()))?;
    let n = dim_p(m);
    Ok((0..n)
        .map(|i| Poly2D::from_coeffs(frame, m, (0..n).map(|j| linv[(i, j)]).collect()))
        .collect())
}

/// Gram matrix `∫_K m_i m_j` of the frame monomials up to `degree`.
pub fn monomial_gram(tri: &Triangle, frame: super::Frame, degree: usize) -> DMatrix<f64> {
    let n = dim_p(degree);
    let q = TriangleQuadrature::new(tri, 2 * degree);
    let mut g = DMatrix::zeros(n, n);
    let mut vals = vec![0.0; n];
    for (p, w) in q.points.iter().zip(&q.weights) {
        let (xi, eta) = frame.local(*p);
        let mut i = 0;
        for d in 0..=degree {
            for b in 0..=d {
                vals[i] = xi.powi((d - b) as i32) * eta.powi(b as i32);
                i += 1;
            }
        }
        for i in 0..n {
            let wi = w * vals[i];
            for j in i..n {
                g[(i, j)] += wi * vals[j];
            }
        }
    }
    for i in 0..n {
        for j in 0..i {
            g[(i, j)] = g[(j, i)];
        }
    }
    g
}

/// `(τ, σ)_K` with the Frobenius product.
pub fn sym_inner(a: &SymTensorPoly2D, b: &SymTensorPoly2D, tri: &Triangle) -> f64 {
    let q = TriangleQuadrature::new(tri, a.degree() + b.degree());
    q.integrate(|x| {
        let u = a.eval(x);
        let v = b.eval(x);
        u[0] * v[0] + 2.0 * u[1] * v[1] + u[2] * v[2]
    })
}

/// `(p, q)_K`.
pub fn scalar_inner(a: &Poly2D, b: &Poly2D, tri: &Triangle) -> f64 {
    let q = TriangleQuadrature::new(tri, a.degree() + b.degree());
    q.integrate(|x| a.eval(x) * b.eval(x))
}

/// Gram matrix of a list of symmetric tensor polynomials on `K`.
pub fn sym_gram(basis: &[SymTensorPoly2D], tri: &Triangle) -> DMatrix<f64> {
    let deg = basis.iter().map(|b| b.degree()).max().unwrap_or(0);
    let q = TriangleQuadrature::new(tri, 2 * deg);
    let vals: Vec<Vec<[f64; 3]>> = basis
        .iter()
        .map(|b| q.points.iter().map(|p| b.eval(*p)).collect())
        .collect();
    let n = basis.len();
    DMatrix::from_fn(n, n, |i, j| {
        q.weights
            .iter()
            .enumerate()
            .map(|(k, w)| {
                let u = vals[i][k];
                let v = vals[j][k];
                w * (u[0] * v[0] + 2.0 * u[1] * v[1] + u[2] * v[2])
            })
            .sum()
    })
}

/// Number of Gauss points needed on an edge for a polynomial of this degree.
pub fn edge_points(degree: usize) -> usize {
    points_for_degree(degree)
}

/// Gauss rule accessor re-exported for edge moment loops.
pub fn edge_rule(degree: usize) -> &'static [(f64, f64)] {
    gauss_01(edge_points(degree))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point;
    use crate::polyalg::Frame;
    use approx::assert_relative_eq;

    fn factorial(n: usize) -> f64 {
        (1..=n).map(|i| i as f64).product()
    }

    #[test]
    fn monomial_integrals_match_closed_form() {
        // Reference-triangle oracle a!b!/(a+b+2)!, times 2|K| for the
        // affinely mapped monomials in barycentric-style coordinates.
        let k = Triangle::new(Point::new(0.5, 0.2), Point::new(1.5, 0.4), Point::new(0.8, 1.3));
        let (a0, b0, c0) = (k.vertices[0], k.vertices[1], k.vertices[2]);
        for a in 0..5 {
            for b in 0..5 - a {
                // λ₁ = reference x, λ₂ = reference y as polynomials in x
                let fr = Frame::unit();
                let det = 2.0 * k.signed_area();
                let l1 = Poly2D::from_coeffs(
                    fr,
                    1,
                    vec![
                        ((c0.y - a0.y) * (-a0.x) - (c0.x - a0.x) * (-a0.y)) / det,
                        (c0.y - a0.y) / det,
                        -(c0.x - a0.x) / det,
                    ],
                );
                let l2 = Poly2D::from_coeffs(
                    fr,
                    1,
                    vec![
                        (-(b0.y - a0.y) * (-a0.x) + (b0.x - a0.x) * (-a0.y)) / det,
                        -(b0.y - a0.y) / det,
                        (b0.x - a0.x) / det,
                    ],
                );
                let mut p = Poly2D::constant(fr, 1.0);
                for _ in 0..a {
                    p = &p * &l1;
                }
                for _ in 0..b {
                    p = &p * &l2;
                }
                let exact = factorial(a) * factorial(b) / factorial(a + b + 2) * 2.0 * k.area();
                assert_relative_eq!(integrate_triangle(&p, &k), exact, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn area_integral() {
        let k = Triangle::reference();
        let one = Poly2D::constant(k.frame(), 1.0);
        assert_relative_eq!(integrate_triangle(&one, &k), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn edge_integral_of_square() {
        let fr = Frame::unit();
        let x = Poly2D::coordinate(fr, 0);
        let e = Segment::new(Point::new(0.0, 0.0), Point::new(1.0, 0.0));
        assert_relative_eq!(integrate_edge(&(&x * &x), &e), 1.0 / 3.0, epsilon = 1e-15);
    }

    #[test]
    fn gram_is_symmetric_positive() {
        let k = Triangle::reference();
        let g = monomial_gram(&k, k.frame(), 3);
        assert!(g.clone().cholesky().is_some());
        assert_relative_eq!(g[(0, 0)], 0.5, epsilon = 1e-14);
    }
}
