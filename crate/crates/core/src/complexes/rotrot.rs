//! Element-level identities of the rotated element under `τ ↦ Aᵀ τ A`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::local::test_triangle;
use super::{Check, ComplexReport};
use crate::assembly::orthonormal_basis;
use crate::element::{DivDivElement, HermiteElement, RotRotElement};
use crate::error::Result;
use crate::geometry::{Point, Triangle};
use crate::polyalg::{dim_p, scalar_inner, sym_inner, Frame, Poly2D, SymTensorPoly2D, VectorPoly2D};

/// Tolerance of the rotated identities.
pub const ROTROT_TOL: f64 = 1e-10;

/// Tolerance of the duality check, as for the unrotated element.
pub const ROTROT_DUALITY_TOL: f64 = 1e-8;

fn random_poly(rng: &mut ChaCha8Rng, fr: Frame, m: usize) -> Poly2D {
    Poly2D::from_coeffs(fr, m, (0..dim_p(m)).map(|_| rng.gen_range(-1.0..1.0)).collect())
}

fn rel_tensor(d: &SymTensorPoly2D, r: &SymTensorPoly2D, tri: &Triangle) -> f64 {
    let den = sym_inner(r, r, tri).sqrt();
    let num = sym_inner(d, d, tri).sqrt();
    if den > 0.0 {
        num / den
    } else {
        num
    }
}

fn rel_scalar(d: &Poly2D, r: &Poly2D, tri: &Triangle) -> f64 {
    let den = scalar_inner(r, r, tri).sqrt();
    let num = scalar_inner(d, d, tri).sqrt();
    if den > 0.0 {
        num / den
    } else {
        num
    }
}

/// Checks the rotated element on two triangles: the operator identities
/// `rot rot τ = div div(Aᵀ τ A)` and `def v = Aᵀ sym curl(Aᵀ v) A`,
/// duality of the rotated basis, the projection property of `Π⊥_K`,
/// `rot rot Π⊥_K τ = Q_{k-2} rot rot τ` and `def I⊥_K v = Π⊥_K def v`.
pub fn check_rotrot_identities(l: usize, k: usize, seed: u64) -> Result<ComplexReport> {
    let mut r = ComplexReport::new(format!("rot-rot element, l = {l}, k = {k}, seed {seed}"));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tris = [
        test_triangle(),
        Triangle::new(Point::new(-0.3, 0.2), Point::new(0.05, -0.1), Point::new(0.1, 0.4)),
    ];
    let mut worst = [0.0_f64; 6];
    for tri in tris {
        let el = RotRotElement::new(DivDivElement::new(tri, l, k)?);
        let herm = HermiteElement::new(tri, l)?;
        let fr = el.base().frame();
        let qb = orthonormal_basis(&tri, k - 2)?;
        let tau = SymTensorPoly2D::new(
            random_poly(&mut rng, fr, k + 2),
            random_poly(&mut rng, fr, k + 2),
            random_poly(&mut rng, fr, k + 2),
        );
        let v = VectorPoly2D::new(random_poly(&mut rng, fr, k + 3), random_poly(&mut rng, fr, k + 3));

        let rr = tau.rotrot();
        let dd = tau.conjugate().divdiv();
        worst[0] = worst[0].max(rel_scalar(&(&rr - &dd), &rr, &tri));

        let def = v.def();
        let rotated = v.rotate_at().sym_curl().conjugate();
        worst[1] = worst[1].max(rel_tensor(&(&def - &rotated), &def, &tri));

        for (j, phi) in el.shapes().iter().enumerate() {
            for (i, x) in el.eval_dofs_poly(phi).iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                worst[2] = worst[2].max((x - target).abs());
            }
        }

        let p = el.interpolate_poly(&tau);
        let pp = el.interpolate_poly(&p);
        worst[3] = worst[3].max(rel_tensor(&(&pp - &p), &p, &tri));

        let lhs = p.rotrot();
        let mut rhs = Poly2D::zero(fr, k - 2);
        for q in &qb {
            rhs.axpy(scalar_inner(&rr, q, &tri), q);
        }
        worst[4] = worst[4].max(rel_scalar(&(&lhs - &rhs), &rhs, &tri));

        let lhs = el.interpolate_vector_poly(&herm, &v)?.def();
        let rhs = el.interpolate_poly(&def);
        worst[5] = worst[5].max(rel_tensor(&(&lhs - &rhs), &rhs, &tri));
    }
    let names = [
        "rot rot τ = div div(Aᵀ τ A)",
        "def v = Aᵀ sym curl(Aᵀ v) A",
        "rotated basis is dual to the rotated DOFs",
        "Π⊥_K Π⊥_K τ = Π⊥_K τ",
        "rot rot Π⊥_K τ = Q_{k-2} rot rot τ",
        "def I⊥_K v = Π⊥_K def v",
    ];
    for (i, (name, w)) in names.into_iter().zip(worst).enumerate() {
        let tol = if i == 2 { ROTROT_DUALITY_TOL } else { ROTROT_TOL };
        r.check(Check::residual(name, w, tol));
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rotated_identities_hold() {
        for (l, k) in [(2, 3), (3, 3), (3, 4)] {
            let r = check_rotrot_identities(l, k, 4).unwrap();
            assert!(r.passed(), "{r}");
        }
    }
}
