//! Vector- and symmetric-tensor-valued polynomials and the differential
//! operators of the div-div and Hessian complexes.
//!
//! Conventions: `curl φ = (∂₂φ, -∂₁φ)ᵀ`; vector operators act row-wise on
//! matrices; `rot v = ∂₁v₂ - ∂₂v₁`; a symmetric tensor is stored as
//! `[τ₁₁, τ₁₂, τ₂₂]`.

use std::ops::{Add, Mul, Sub};

use super::poly::{Poly1D, Poly2D};
use super::Frame;
use crate::geometry::Point;

#[derive(Clone, Debug, PartialEq)]
pub struct VectorPoly2D {
    pub comps: [Poly2D; 2],
}

#[derive(Clone, Debug, PartialEq)]
pub struct SymTensorPoly2D {
    /// `[τ₁₁, τ₁₂, τ₂₂]`
    pub comps: [Poly2D; 3],
}

/// Raises every component to the largest degree among them.
fn unify<const N: usize>(comps: [Poly2D; N]) -> [Poly2D; N] {
    let d = comps.iter().map(Poly2D::degree).max().unwrap_or(0);
    comps.map(|c| c.elevate(d))
}

impl VectorPoly2D {
    pub fn new(x: Poly2D, y: Poly2D) -> Self {
        debug_assert_eq!(x.frame(), y.frame());
        Self { comps: unify([x, y]) }
    }

    pub fn zero(frame: Frame, degree: usize) -> Self {
        Self::new(Poly2D::zero(frame, degree), Poly2D::zero(frame, degree))
    }

    /// `q e_i`.
    pub fn unit(q: Poly2D, i: usize) -> Self {
        let z = Poly2D::zero(q.frame(), q.degree());
        if i == 0 {
            Self::new(q, z)
        } else {
            Self::new(z, q)
        }
    }

    pub fn frame(&self) -> Frame {
        self.comps[0].frame()
    }

    pub fn degree(&self) -> usize {
        self.comps[0].degree()
    }

    pub fn eval(&self, p: Point) -> [f64; 2] {
        [self.comps[0].eval(p), self.comps[1].eval(p)]
    }

    pub fn scaled(&self, a: f64) -> Self {
        Self::new(self.comps[0].scaled(a), self.comps[1].scaled(a))
    }

    pub fn axpy(&mut self, a: f64, o: &VectorPoly2D) {
        for (s, c) in self.comps.iter_mut().zip(&o.comps) {
            s.axpy(a, c);
        }
        self.comps = unify(self.comps.clone());
    }

    pub fn elevate(&self, degree: usize) -> Self {
        Self::new(self.comps[0].elevate(degree), self.comps[1].elevate(degree))
    }

    pub fn reframe(&self, frame: Frame) -> Self {
        Self::new(self.comps[0].reframe(frame), self.comps[1].reframe(frame))
    }

    /// Concatenated coefficients `[v₁ | v₂]` at the given degree.
    pub fn coeffs_at(&self, degree: usize) -> Vec<f64> {
        let mut c = self.comps[0].coeffs_at(degree);
        c.extend(self.comps[1].coeffs_at(degree));
        c
    }

    pub fn div(&self) -> Poly2D {
        &self.comps[0].dx() + &self.comps[1].dy()
    }

    /// `rot v = ∂₁v₂ - ∂₂v₁ = div(Aᵀ v)`.
    pub fn rot(&self) -> Poly2D {
        &self.comps[1].dx() - &self.comps[0].dy()
    }

    /// Symmetric part of the row-wise curl.
    pub fn sym_curl(&self) -> SymTensorPoly2D {
        let [v1, v2] = &self.comps;
        let t11 = v1.dy();
        let t22 = -&v2.dx();
        let t12 = (&v2.dy() - &v1.dx()).scaled(0.5);
        SymTensorPoly2D::new(t11, t12, t22)
    }

    /// Symmetric gradient.
    pub fn def(&self) -> SymTensorPoly2D {
        let [v1, v2] = &self.comps;
        let t12 = (&v1.dy() + &v2.dx()).scaled(0.5);
        SymTensorPoly2D::new(v1.dx(), t12, v2.dy())
    }

    /// `Aᵀ v = (v₂, -v₁)`.
    pub fn rotate_at(&self) -> Self {
        Self::new(self.comps[1].clone(), -&self.comps[0])
    }

    /// `A v = (-v₂, v₁)`.
    pub fn rotate_a(&self) -> Self {
        Self::new(-&self.comps[1], self.comps[0].clone())
    }

    /// `nᵀ v` restricted to a segment.
    pub fn restrict_dot(&self, dir: Point, a: Point, b: Point) -> Poly1D {
        let p = &self.comps[0].scaled(dir.x) + &self.comps[1].scaled(dir.y);
        p.restrict(a, b)
    }
}

impl SymTensorPoly2D {
    pub fn new(t11: Poly2D, t12: Poly2D, t22: Poly2D) -> Self {
        debug_assert_eq!(t11.frame(), t12.frame());
        debug_assert_eq!(t11.frame(), t22.frame());
        Self {
            comps: unify([t11, t12, t22]),
        }
    }

    pub fn zero(frame: Frame, degree: usize) -> Self {
        let z = Poly2D::zero(frame, degree);
        Self::new(z.clone(), z.clone(), z)
    }

    /// Tensor with a single nonzero component slot (`0 = 11, 1 = 12, 2 = 22`).
    pub fn unit(q: Poly2D, slot: usize) -> Self {
        let z = Poly2D::zero(q.frame(), q.degree());
        let mut c = [z.clone(), z.clone(), z];
        c[slot] = q;
        Self::new(c[0].clone(), c[1].clone(), c[2].clone())
    }

    pub fn frame(&self) -> Frame {
        self.comps[0].frame()
    }

    pub fn degree(&self) -> usize {
        self.comps[0].degree()
    }

    pub fn eval(&self, p: Point) -> [f64; 3] {
        [
            self.comps[0].eval(p),
            self.comps[1].eval(p),
            self.comps[2].eval(p),
        ]
    }

    pub fn scaled(&self, a: f64) -> Self {
        Self::new(
            self.comps[0].scaled(a),
            self.comps[1].scaled(a),
            self.comps[2].scaled(a),
        )
    }

    pub fn axpy(&mut self, a: f64, o: &SymTensorPoly2D) {
        for (s, c) in self.comps.iter_mut().zip(&o.comps) {
            s.axpy(a, c);
        }
        self.comps = unify(self.comps.clone());
    }

    pub fn elevate(&self, degree: usize) -> Self {
        Self::new(
            self.comps[0].elevate(degree),
            self.comps[1].elevate(degree),
            self.comps[2].elevate(degree),
        )
    }

    pub fn reframe(&self, frame: Frame) -> Self {
        Self::new(
            self.comps[0].reframe(frame),
            self.comps[1].reframe(frame),
            self.comps[2].reframe(frame),
        )
    }

    /// Concatenated coefficients `[τ₁₁ | τ₁₂ | τ₂₂]` at the given degree.
    pub fn coeffs_at(&self, degree: usize) -> Vec<f64> {
        let mut c = self.comps[0].coeffs_at(degree);
        c.extend(self.comps[1].coeffs_at(degree));
        c.extend(self.comps[2].coeffs_at(degree));
        c
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.comps
            .iter()
            .map(Poly2D::max_abs_coeff)
            .fold(0.0, f64::max)
    }

    /// Row-wise divergence.
    pub fn div(&self) -> VectorPoly2D {
        let [t11, t12, t22] = &self.comps;
        VectorPoly2D::new(&t11.dx() + &t12.dy(), &t12.dx() + &t22.dy())
    }

    pub fn divdiv(&self) -> Poly2D {
        let [t11, t12, t22] = &self.comps;
        let mut p = t11.dx().dx();
        p.axpy(2.0, &t12.dx().dy());
        p.axpy(1.0, &t22.dy().dy());
        p
    }

    /// Row-wise rot: `(rot(τ₁₁, τ₁₂), rot(τ₂₁, τ₂₂))`.
    pub fn rot(&self) -> VectorPoly2D {
        let [t11, t12, t22] = &self.comps;
        VectorPoly2D::new(&t12.dx() - &t11.dy(), &t22.dx() - &t12.dy())
    }

    pub fn rotrot(&self) -> Poly2D {
        self.rot().rot()
    }

    /// Conjugation `Aᵀ τ A`, which swaps `τ₁₁`, `τ₂₂` and negates `τ₁₂`.
    /// It is an involution and equals `A τ Aᵀ`.
    pub fn conjugate(&self) -> Self {
        let [t11, t12, t22] = &self.comps;
        Self::new(t22.clone(), -t12, t11.clone())
    }

    /// `aᵀ τ b` as a scalar polynomial, for constant vectors `a`, `b`.
    pub fn contract(&self, a: Point, b: Point) -> Poly2D {
        let [t11, t12, t22] = &self.comps;
        let mut p = t11.scaled(a.x * b.x);
        p.axpy(a.x * b.y + a.y * b.x, t12);
        p.axpy(a.y * b.y, t22);
        p
    }

    /// `τ : σ` (Frobenius product, off-diagonal counted twice).
    pub fn frobenius(&self, other: &SymTensorPoly2D) -> Poly2D {
        let mut p = &self.comps[0] * &other.comps[0];
        p.axpy(2.0, &(&self.comps[1] * &other.comps[1]));
        p.axpy(1.0, &(&self.comps[2] * &other.comps[2]));
        p
    }

    /// `τ v` for a vector polynomial `v`.
    pub fn apply(&self, v: &VectorPoly2D) -> VectorPoly2D {
        let [t11, t12, t22] = &self.comps;
        let [v1, v2] = &v.comps;
        VectorPoly2D::new(&(t11 * v1) + &(t12 * v2), &(t12 * v1) + &(t22 * v2))
    }
}

/// Gradient of a scalar polynomial.
pub fn grad(p: &Poly2D) -> VectorPoly2D {
    VectorPoly2D::new(p.dx(), p.dy())
}

/// Hessian `∇²p`.
pub fn hess(p: &Poly2D) -> SymTensorPoly2D {
    let px = p.dx();
    SymTensorPoly2D::new(px.dx(), px.dy(), p.dy().dy())
}

/// `curl φ = (∂₂φ, -∂₁φ)`.
pub fn curl(p: &Poly2D) -> VectorPoly2D {
    VectorPoly2D::new(p.dy(), -&p.dx())
}

/// `curl curl φ = Aᵀ ∇²φ A`.
pub fn curlcurl(p: &Poly2D) -> SymTensorPoly2D {
    hess(p).conjugate()
}

impl Add<&SymTensorPoly2D> for &SymTensorPoly2D {
    type Output = SymTensorPoly2D;
    fn add(self, rhs: &SymTensorPoly2D) -> SymTensorPoly2D {
        let mut o = self.clone();
        o.axpy(1.0, rhs);
        o
    }
}

impl Sub<&SymTensorPoly2D> for &SymTensorPoly2D {
    type Output = SymTensorPoly2D;
    fn sub(self, rhs: &SymTensorPoly2D) -> SymTensorPoly2D {
        let mut o = self.clone();
        o.axpy(-1.0, rhs);
        o
    }
}

impl Mul<f64> for &SymTensorPoly2D {
    type Output = SymTensorPoly2D;
    fn mul(self, rhs: f64) -> SymTensorPoly2D {
        self.scaled(rhs)
    }
}

impl Add<&VectorPoly2D> for &VectorPoly2D {
    type Output = VectorPoly2D;
    fn add(self, rhs: &VectorPoly2D) -> VectorPoly2D {
        let mut o = self.clone();
        o.axpy(1.0, rhs);
        o
    }
}

impl Sub<&VectorPoly2D> for &VectorPoly2D {
    type Output = VectorPoly2D;
    fn sub(self, rhs: &VectorPoly2D) -> VectorPoly2D {
        let mut o = self.clone();
        o.axpy(-1.0, rhs);
        o
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn f() -> Frame {
        Frame::unit()
    }

    #[test]
    fn hessian_of_linear_is_zero() {
        let p = Poly2D::from_coeffs(f(), 1, vec![0.3, -1.2, 4.0]);
        assert_eq!(hess(&p).max_abs_coeff(), 0.0);
    }

    #[test]
    fn sym_curl_kills_rt() {
        // v = a + b x with x measured from the frame origin
        let x = Poly2D::coordinate(f(), 0);
        let y = Poly2D::coordinate(f(), 1);
        let v = VectorPoly2D::new(
            &Poly2D::constant(f(), 0.7) + &x.scaled(1.5),
            &Poly2D::constant(f(), -0.2) + &y.scaled(1.5),
        );
        assert!(v.sym_curl().max_abs_coeff() < 1e-15);
    }

    #[test]
    fn divdiv_of_sym_curl_vanishes() {
        let fr = Frame::new(Point::new(0.2, 0.4), 0.5);
        let c: Vec<f64> = (0..15).map(|i| ((i * 7 % 11) as f64) - 5.0).collect();
        let v = VectorPoly2D::new(
            Poly2D::from_coeffs(fr, 4, c.clone()),
            Poly2D::from_coeffs(fr, 4, c.iter().rev().cloned().collect()),
        );
        assert!(v.sym_curl().divdiv().max_abs_coeff() < 1e-10);
    }

    #[test]
    fn rotrot_is_conjugated_divdiv() {
        let fr = Frame::unit();
        let t = SymTensorPoly2D::new(
            Poly2D::from_coeffs(fr, 3, (0..10).map(|i| i as f64).collect()),
            Poly2D::from_coeffs(fr, 3, (0..10).map(|i| (i * i) as f64 * 0.1).collect()),
            Poly2D::from_coeffs(fr, 3, (0..10).map(|i| 1.0 - i as f64).collect()),
        );
        let lhs = t.rotrot();
        let rhs = t.conjugate().divdiv();
        for (a, b) in lhs.coeffs().iter().zip(rhs.coeffs()) {
            assert_relative_eq!(a, b, epsilon = 1e-12);
        }
    }

    #[test]
    fn def_is_conjugated_sym_curl() {
        // def v = A sym curl(Aᵀ v) Aᵀ
        let fr = Frame::unit();
        let v = VectorPoly2D::new(
            Poly2D::from_coeffs(fr, 2, vec![1.0, 2.0, -1.0, 0.5, 0.3, -0.7]),
            Poly2D::from_coeffs(fr, 2, vec![0.0, -1.0, 3.0, 0.2, -0.4, 1.1]),
        );
        let lhs = v.def();
        let rhs = v.rotate_at().sym_curl().conjugate();
        assert!((&lhs - &rhs).max_abs_coeff() < 1e-14);
    }
}
