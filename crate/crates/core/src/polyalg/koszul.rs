//! Koszul-type multiplication operators. The variable `x` is measured from
//! the polynomial's frame center in physical units and `x⊥ = (x₂, -x₁)`.

use super::poly::Poly2D;
use super::tensor::{SymTensorPoly2D, VectorPoly2D};
use super::Frame;
use crate::geometry::Point;

fn coords(frame: Frame) -> (Poly2D, Poly2D) {
    (Poly2D::coordinate(frame, 0), Poly2D::coordinate(frame, 1))
}

/// `q ↦ x xᵀ q`.
pub fn xxt_mul(q: &Poly2D) -> SymTensorPoly2D {
    let (x1, x2) = coords(q.frame());
    SymTensorPoly2D::new(&(&x1 * &x1) * q, &(&x1 * &x2) * q, &(&x2 * &x2) * q)
}

/// `q ↦ x⊥ (x⊥)ᵀ q`.
pub fn xperp_xperpt_mul(q: &Poly2D) -> SymTensorPoly2D {
    let (x1, x2) = coords(q.frame());
    SymTensorPoly2D::new(&(&x2 * &x2) * q, &(&(&x1 * &x2) * q) * -1.0, &(&x1 * &x1) * q)
}

/// `τ ↦ τ x⊥`.
pub fn xperp_mul(t: &SymTensorPoly2D) -> VectorPoly2D {
    let (x1, x2) = coords(t.frame());
    t.apply(&VectorPoly2D::new(x2, -&x1))
}

/// `v ↦ sym(x⊥ ⊗ v) = (x⊥ vᵀ + v x⊥ᵀ)/2`.
pub fn sym_xperp_outer(v: &VectorPoly2D) -> SymTensorPoly2D {
    let (x1, x2) = coords(v.frame());
    let xp = [x2, -&x1];
    let [v1, v2] = &v.comps;
    SymTensorPoly2D::new(
        &xp[0] * v1,
        (&(&xp[0] * v2) + &(&xp[1] * v1)).scaled(0.5),
        &xp[1] * v2,
    )
}

/// `sym(x ⊗ v)`, the rotated counterpart of [`sym_xperp_outer`].
pub fn sym_x_outer(v: &VectorPoly2D) -> SymTensorPoly2D {
    let (x1, x2) = coords(v.frame());
    let [v1, v2] = &v.comps;
    SymTensorPoly2D::new(
        &x1 * v1,
        (&(&x1 * v2) + &(&x2 * v1)).scaled(0.5),
        &x2 * v2,
    )
}

/// `τ ↦ xᵀ τ x`.
pub fn xtx_sandwich(t: &SymTensorPoly2D) -> Poly2D {
    let (x1, x2) = coords(t.frame());
    let [t11, t12, t22] = &t.comps;
    let mut p = &(&x1 * &x1) * t11;
    p.axpy(2.0, &(&(&x1 * &x2) * t12));
    p.axpy(1.0, &(&(&x2 * &x2) * t22));
    p
}

/// `π_RT v = v(0) + ½ (div v)(0) x`, evaluated at the frame center.
pub fn pi_rt(v: &VectorPoly2D) -> VectorPoly2D {
    let fr = v.frame();
    let (x1, x2) = coords(fr);
    let c = fr.center;
    let v0 = v.eval(c);
    let d0 = v.div().eval(c);
    VectorPoly2D::new(
        &Poly2D::constant(fr, v0[0]) + &x1.scaled(0.5 * d0),
        &Poly2D::constant(fr, v0[1]) + &x2.scaled(0.5 * d0),
    )
}

/// `π₁ v = v(0) + xᵀ (∇v)(0)`.
pub fn pi_1(p: &Poly2D) -> Poly2D {
    let fr = p.frame();
    let (x1, x2) = coords(fr);
    let j = p.jet(fr.center);
    let mut out = Poly2D::constant(fr, j.value).elevate(1);
    out.axpy(j.grad[0], &x1);
    out.axpy(j.grad[1], &x2);
    out
}

/// Evaluates `x⊥` at a physical point for the given frame.
pub fn xperp_at(frame: Frame, p: Point) -> Point {
    let d = p - frame.center;
    Point::new(d.y, -d.x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn xxt_of_one() {
        let fr = Frame::unit();
        let t = xxt_mul(&Poly2D::constant(fr, 1.0));
        let p = Point::new(0.3, -0.8);
        let v = t.eval(p);
        assert_relative_eq!(v[0], 0.09, epsilon = 1e-15);
        assert_relative_eq!(v[1], -0.24, epsilon = 1e-15);
        assert_relative_eq!(v[2], 0.64, epsilon = 1e-15);
    }

    #[test]
    fn koszul_compositions_vanish() {
        let fr = Frame::new(Point::new(0.4, 0.1), 0.3);
        let q = Poly2D::from_coeffs(fr, 3, (0..10).map(|i| (i as f64).cos()).collect());
        assert!(xperp_mul(&xxt_mul(&q)).comps.iter().all(|c| c.max_abs_coeff() < 1e-14));
        let t = SymTensorPoly2D::new(q.clone(), q.dx(), q.dy());
        let pr = pi_rt(&xperp_mul(&t));
        assert!(pr.comps.iter().all(|c| c.max_abs_coeff() < 1e-13));
    }

    #[test]
    fn pi_rt_reproduces_rt() {
        let fr = Frame::new(Point::new(-0.2, 0.5), 2.0);
        let (x1, x2) = coords(fr);
        let v = VectorPoly2D::new(
            &Poly2D::constant(fr, 0.3) + &x1.scaled(-1.7),
            &Poly2D::constant(fr, 2.0) + &x2.scaled(-1.7),
        );
        let w = pi_rt(&v);
        assert!((&v - &w).comps.iter().all(|c| c.max_abs_coeff() < 1e-14));
    }
}
