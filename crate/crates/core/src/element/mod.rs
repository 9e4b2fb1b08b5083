//! Local finite elements: the div-div element, the vector Hermite element,
//! the commuting interpolation onto the Hermite space, and the rotated
//! (rot-rot) element.

mod divdiv;
mod dofs;
mod hermite;
mod rotrot;

pub use divdiv::{edge_traces, DivDivElement};
pub use dofs::{Anchor, DofFunctional, DofKind, EntityCounts};
pub use hermite::HermiteElement;
pub use rotrot::RotRotElement;

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::fields::{SymCurlOf, VectorField};
use crate::polyalg::{sym_gram, sym_inner, SymTensorPoly2D, VectorPoly2D};

/// Tolerance on the relative least-squares residual of the bubble correction.
pub const COMMUTING_LS_TOL: f64 = 1e-8;

/// Size of `∇v` on the cell estimated from the coefficients of `v`. The
/// residual check is relative to at least this, so that it stays
/// meaningful when both sides of the identity vanish.
fn gradient_scale(herm: &HermiteElement, v: &VectorPoly2D) -> f64 {
    let c = v.comps.iter().map(|p| p.max_abs_coeff()).fold(0.0, f64::max);
    c * herm.triangle().area().sqrt() / herm.frame().scale
}

/// Finds `ṽ` in the bubble space with `sym curl ṽ = target` in the
/// least-squares sense and checks the residual against
/// `tol · max(scale, floor)`.
fn bubble_correction(
    herm: &HermiteElement,
    target: &SymTensorPoly2D,
    scale: f64,
    floor: f64,
) -> Result<VectorPoly2D> {
    let tri = herm.triangle();
    let bubbles = herm.bubble_basis();
    let curls: Vec<SymTensorPoly2D> = bubbles.iter().map(|b| b.sym_curl()).collect();
    let g = sym_gram(&curls, tri);
    let r = DVector::from_iterator(curls.len(), curls.iter().map(|c| sym_inner(c, target, tri)));
    let alpha = g
        .cholesky()
        .ok_or_else(|| Error::Solver("sym curl is not injective on the bubble space".into()))?
        .solve(&r);
    let mut corr = VectorPoly2D::zero(herm.frame(), herm.degree());
    let mut fit = SymTensorPoly2D::zero(herm.frame(), herm.degree() - 1);
    for (i, (b, c)) in bubbles.iter().zip(&curls).enumerate() {
        corr.axpy(alpha[i], b);
        fit.axpy(alpha[i], c);
    }
    let miss = &fit - target;
    let res = sym_inner(&miss, &miss, tri).sqrt();
    let scale = scale.max(floor);
    if res > COMMUTING_LS_TOL * scale {
        return Err(Error::Residual {
            context: "bubble correction of the commuting interpolation".into(),
            residual: res / scale.max(f64::MIN_POSITIVE),
            tol: COMMUTING_LS_TOL,
        });
    }
    Ok(corr)
}

fn l2(t: &SymTensorPoly2D, herm: &HermiteElement) -> f64 {
    sym_inner(t, t, herm.triangle()).sqrt()
}

/// The interpolation `I_K v = Ĩ_K v + ṽ` with `sym curl I_K v = Π_K sym curl v`,
/// for a polynomial `v`.
pub fn interpolate_commuting_poly(
    herm: &HermiteElement,
    elem: &DivDivElement,
    v: &VectorPoly2D,
) -> Result<VectorPoly2D> {
    check_compatible(herm, elem)?;
    let base = herm.interpolate_poly(v);
    let pi = elem.interpolate_poly(&v.sym_curl());
    let sc = base.sym_curl();
    let target = &pi - &sc;
    let floor = gradient_scale(herm, &base);
    let corr = bubble_correction(herm, &target, l2(&pi, herm) + l2(&sc, herm), floor)?;
    Ok(&base + &corr)
}

/// As [`interpolate_commuting_poly`] for a field with first and second
/// derivatives.
pub fn interpolate_commuting(
    herm: &HermiteElement,
    elem: &DivDivElement,
    v: &dyn VectorField,
) -> Result<VectorPoly2D> {
    check_compatible(herm, elem)?;
    let p = herm.triangle().vertices[0];
    if v.second_derivatives(p).is_none() {
        return Err(Error::MissingDerivative("the commuting interpolation"));
    }
    let base = herm.interpolate(v)?;
    let pi = elem.interpolate(&SymCurlOf(v))?;
    let sc = base.sym_curl();
    let target = &pi - &sc;
    let floor = gradient_scale(herm, &base);
    let corr = bubble_correction(herm, &target, l2(&pi, herm) + l2(&sc, herm), floor)?;
    Ok(&base + &corr)
}

fn check_compatible(herm: &HermiteElement, elem: &DivDivElement) -> Result<()> {
    if herm.l() != elem.l() || herm.triangle() != elem.triangle() {
        return Err(Error::InvalidParameter(
            "Hermite and div-div elements must share the cell and l".into(),
        ));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Point, Triangle};
    use crate::polyalg::{dim_p, Poly2D};

    fn tri() -> Triangle {
        Triangle::new(Point::new(0.2, 0.1), Point::new(0.9, 0.3), Point::new(0.4, 0.8))
    }

    fn random_vector(elem: &DivDivElement, deg: usize, seed: f64) -> VectorPoly2D {
        let fr = elem.frame();
        let n = dim_p(deg);
        VectorPoly2D::new(
            Poly2D::from_coeffs(fr, deg, (0..n).map(|i| ((i as f64 + 0.5) * seed).sin()).collect()),
            Poly2D::from_coeffs(fr, deg, (0..n).map(|i| ((i as f64 + 1.5) * seed).cos()).collect()),
        )
    }

    #[test]
    fn commuting_identity_on_high_degree_input() {
        for (l, k) in [(2, 3), (3, 3), (3, 4), (4, 4), (4, 5)] {
            let elem = DivDivElement::new(tri(), l, k).unwrap();
            let herm = HermiteElement::new(tri(), l).unwrap();
            let v = random_vector(&elem, k + 3, 0.63);
            let iv = interpolate_commuting_poly(&herm, &elem, &v).unwrap();
            let lhs = iv.sym_curl();
            let rhs = elem.interpolate_poly(&v.sym_curl());
            let d = &lhs - &rhs;
            let rel = sym_inner(&d, &d, &tri()).sqrt() / sym_inner(&rhs, &rhs, &tri()).sqrt();
            assert!(rel < 1e-9, "l={l} k={k}: {rel}");
        }
    }

    #[test]
    fn reproduces_hermite_polynomials() {
        let elem = DivDivElement::new(tri(), 3, 3).unwrap();
        let herm = HermiteElement::new(tri(), 3).unwrap();
        let v = random_vector(&elem, 4, 0.37);
        let iv = interpolate_commuting_poly(&herm, &elem, &v).unwrap();
        assert!((&iv - &v).comps.iter().all(|c| c.max_abs_coeff() < 1e-9));
        let iv2 = interpolate_commuting(&herm, &elem, &v).unwrap();
        assert!((&iv2 - &v).comps.iter().all(|c| c.max_abs_coeff() < 1e-9));
    }
}
