//! Bivariate polynomials over a centered, scaled monomial basis.
//!
//! A [`Poly2D`] of degree `m` stores `(m+1)(m+2)/2` coefficients for the
//! monomials `ξ^a η^b` with `ξ = (x - c₁)/s`, `η = (y - c₂)/s`, in graded
//! lexicographic order (`1, ξ, η, ξ², ξη, η², ...`). Because the order is
//! graded, the coefficient vector of a lower-degree polynomial is a prefix of
//! the same polynomial viewed at higher degree.
//!
//! Degrees are static: every operation returns the analytically maximal
//! degree and keeps trailing zero coefficients.

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use crate::geometry::Point;

/// Number of monomials of total degree at most `m` in two variables.
pub const fn dim_p(m: usize) -> usize {
    (m + 1) * (m + 2) / 2
}

/// Same as [`dim_p`] but `0` for negative degrees.
pub fn dim_p_signed(m: i64) -> usize {
    if m < 0 {
        0
    } else {
        dim_p(m as usize)
    }
}

/// Position of `ξ^a η^b` in the graded ordering.
pub const fn monomial_index(a: usize, b: usize) -> usize {
    let d = a + b;
    d * (d + 1) / 2 + b
}

/// Exponents `(a, b)` of the monomial at position `i`.
pub fn monomial_exponents(i: usize) -> (usize, usize) {
    let mut d = 0;
    while dim_p(d) <= i {
        d += 1;
    }
    let b = i - d * (d + 1) / 2;
    (d - b, b)
}

/// Local affine coordinate system `ξ = (x - center)/scale`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Frame {
    pub center: Point,
    pub scale: f64,
}

impl Frame {
    pub fn new(center: Point, scale: f64) -> Self {
        assert!(scale > 0.0, "frame scale must be positive");
        Self { center, scale }
    }

    /// Origin-centered unit frame.
    pub fn unit() -> Self {
        Self::new(Point::new(0.0, 0.0), 1.0)
    }

    #[inline]
    pub fn local(&self, p: Point) -> (f64, f64) {
        (
            (p.x - self.center.x) / self.scale,
            (p.y - self.center.y) / self.scale,
        )
    }
}

/// Powers `ξ^0..=ξ^m` and `η^0..=η^m`.
fn powers(xi: f64, eta: f64, m: usize) -> (Vec<f64>, Vec<f64>) {
    let mut px = vec![1.0; m + 1];
    let mut py = vec![1.0; m + 1];
    for i in 1..=m {
        px[i] = px[i - 1] * xi;
        py[i] = py[i - 1] * eta;
    }
    (px, py)
}

/// Value, physical gradient and physical Hessian `[xx, xy, yy]` at a point.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Jet {
    pub value: f64,
    pub grad: [f64; 2],
    pub hess: [f64; 3],
}

#[derive(Clone, Debug, PartialEq)]
pub struct Poly2D {
    frame: Frame,
    degree: usize,
    coeffs: Vec<f64>,
}

impl Poly2D {
    pub fn zero(frame: Frame, degree: usize) -> Self {
        Self {
            frame,
            degree,
            coeffs: vec![0.0; dim_p(degree)],
        }
    }

    pub fn constant(frame: Frame, c: f64) -> Self {
        Self {
            frame,
            degree: 0,
            coeffs: vec![c],
        }
    }

    /// The scaled monomial `ξ^a η^b`.
    pub fn monomial(frame: Frame, a: usize, b: usize) -> Self {
        let mut p = Self::zero(frame, a + b);
        p.coeffs[monomial_index(a, b)] = 1.0;
        p
    }

    /// `i`-th basis monomial in graded order.
    pub fn basis(frame: Frame, i: usize) -> Self {
        let (a, b) = monomial_exponents(i);
        Self::monomial(frame, a, b)
    }

    /// Physical Koszul coordinate `x_i - c_i` (`i` = 0 or 1).
    pub fn coordinate(frame: Frame, i: usize) -> Self {
        let mut p = Self::zero(frame, 1);
        p.coeffs[1 + i] = frame.scale;
        p
    }

    /// Builds a polynomial from coefficients; the length must be `dim_p(degree)`.
    pub fn from_coeffs(frame: Frame, degree: usize, coeffs: Vec<f64>) -> Self {
        assert_eq!(
            coeffs.len(),
            dim_p(degree),
            "coefficient length does not match degree {degree}"
        );
        Self {
            frame,
            degree,
            coeffs,
        }
    }

    pub fn frame(&self) -> Frame {
        self.frame
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [f64] {
        &mut self.coeffs
    }

    /// Same polynomial stored at a higher degree.
    pub fn elevate(&self, degree: usize) -> Self {
        assert!(degree >= self.degree, "elevate cannot lower the degree");
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(dim_p(degree), 0.0);
        Self {
            frame: self.frame,
            degree,
            coeffs,
        }
    }

    /// Coefficients padded to `dim_p(degree)`.
    pub fn coeffs_at(&self, degree: usize) -> Vec<f64> {
        self.elevate(degree).coeffs
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Re-expands the polynomial in another frame (exact up to round-off).
    pub fn reframe(&self, frame: Frame) -> Self {
        if frame == self.frame {
            return self.clone();
        }
        // ξ_old = (s_new ξ_new + c_new - c_old)/s_old
        let r = frame.scale / self.frame.scale;
        let ox = (frame.center.x - self.frame.center.x) / self.frame.scale;
        let oy = (frame.center.y - self.frame.center.y) / self.frame.scale;
        let mut xi = Poly2D::zero(frame, 1);
        xi.coeffs[0] = ox;
        xi.coeffs[1] = r;
        let mut eta = Poly2D::zero(frame, 1);
        eta.coeffs[0] = oy;
        eta.coeffs[2] = r;
        let m = self.degree;
        let mut xpow = vec![Poly2D::constant(frame, 1.0)];
        let mut ypow = vec![Poly2D::constant(frame, 1.0)];
        for i in 1..=m {
            xpow.push(&xpow[i - 1] * &xi);
            ypow.push(&ypow[i - 1] * &eta);
        }
        let mut out = Poly2D::zero(frame, m);
        for (i, c) in self.coeffs.iter().enumerate() {
            if *c == 0.0 {
                continue;
            }
            let (a, b) = monomial_exponents(i);
            let term = &xpow[a] * &ypow[b];
            out.axpy(*c, &term);
        }
        out
    }

    /// `self += alpha * other` (degree grows if needed).
    pub fn axpy(&mut self, alpha: f64, other: &Poly2D) {
        debug_assert_eq!(self.frame, other.frame, "frame mismatch");
        if other.degree > self.degree {
            *self = self.elevate(other.degree);
        }
        for (s, o) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *s += alpha * o;
        }
    }

    pub fn scaled(&self, alpha: f64) -> Self {
        Self {
            frame: self.frame,
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|c| alpha * c).collect(),
        }
    }

    pub fn eval(&self, p: Point) -> f64 {
        let (xi, eta) = self.frame.local(p);
        let (px, py) = powers(xi, eta, self.degree);
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let (a, b) = monomial_exponents_fast(i, self.degree);
                c * px[a] * py[b]
            })
            .sum()
    }

    /// Value and physical derivatives up to order two.
    pub fn jet(&self, p: Point) -> Jet {
        let (xi, eta) = self.frame.local(p);
        let (px, py) = powers(xi, eta, self.degree);
        let s = self.frame.scale;
        let mut j = Jet::default();
        let mut i = 0;
        for d in 0..=self.degree {
            for b in 0..=d {
                let a = d - b;
                let c = self.coeffs[i];
                i += 1;
                if c == 0.0 {
                    continue;
                }
                j.value += c * px[a] * py[b];
                if a >= 1 {
                    j.grad[0] += c * a as f64 * px[a - 1] * py[b];
                }
                if b >= 1 {
                    j.grad[1] += c * b as f64 * px[a] * py[b - 1];
                }
                if a >= 2 {
                    j.hess[0] += c * (a * (a - 1)) as f64 * px[a - 2] * py[b];
                }
                if a >= 1 && b >= 1 {
                    j.hess[1] += c * (a * b) as f64 * px[a - 1] * py[b - 1];
                }
                if b >= 2 {
                    j.hess[2] += c * (b * (b - 1)) as f64 * px[a] * py[b - 2];
                }
            }
        }
        j.grad[0] /= s;
        j.grad[1] /= s;
        for h in &mut j.hess {
            *h /= s * s;
        }
        j
    }

    /// Physical partial derivative `∂/∂x_dir`.
    pub fn diff(&self, dir: usize) -> Self {
        if self.degree == 0 {
            return Poly2D::zero(self.frame, 0);
        }
        let mut out = Poly2D::zero(self.frame, self.degree - 1);
        let inv_s = 1.0 / self.frame.scale;
        for (i, c) in self.coeffs.iter().enumerate() {
            let (a, b) = monomial_exponents_fast(i, self.degree);
            match dir {
                0 if a > 0 => out.coeffs[monomial_index(a - 1, b)] += c * a as f64 * inv_s,
                1 if b > 0 => out.coeffs[monomial_index(a, b - 1)] += c * b as f64 * inv_s,
                0 | 1 => {}
                _ => panic!("direction must be 0 or 1"),
            }
        }
        out
    }

    pub fn dx(&self) -> Self {
        self.diff(0)
    }

    pub fn dy(&self) -> Self {
        self.diff(1)
    }

    /// Restriction to the segment `a + t (b - a)`, `t ∈ [0, 1]`.
    pub fn restrict(&self, a: Point, b: Point) -> Poly1D {
        let (xa, ya) = self.frame.local(a);
        let (xb, yb) = self.frame.local(b);
        let xi = Poly1D::new(vec![xa, xb - xa]);
        let eta = Poly1D::new(vec![ya, yb - ya]);
        let m = self.degree;
        let mut xpow = vec![Poly1D::new(vec![1.0])];
        let mut ypow = vec![Poly1D::new(vec![1.0])];
        for i in 1..=m {
            xpow.push(&xpow[i - 1] * &xi);
            ypow.push(&ypow[i - 1] * &eta);
        }
        let mut out = Poly1D::new(vec![0.0; m + 1]);
        for (i, c) in self.coeffs.iter().enumerate() {
            if *c == 0.0 {
                continue;
            }
            let (ea, eb) = monomial_exponents_fast(i, m);
            out.axpy(*c, &(&xpow[ea] * &ypow[eb]));
        }
        out
    }
}

/// Exponent lookup without the linear scan of [`monomial_exponents`].
#[inline]
fn monomial_exponents_fast(i: usize, _max_degree: usize) -> (usize, usize) {
    // d = floor((sqrt(8i+1)-1)/2), corrected for round-off.
    let mut d = ((((8 * i + 1) as f64).sqrt() - 1.0) / 2.0) as usize;
    while dim_p(d) <= i {
        d += 1;
    }
    while d > 0 && d * (d + 1) / 2 > i {
        d -= 1;
    }
    let b = i - d * (d + 1) / 2;
    (d - b, b)
}

impl Add<&Poly2D> for &Poly2D {
    type Output = Poly2D;
    fn add(self, rhs: &Poly2D) -> Poly2D {
        let mut out = self.clone();
        out.axpy(1.0, rhs);
        out
    }
}

impl Sub<&Poly2D> for &Poly2D {
    type Output = Poly2D;
    fn sub(self, rhs: &Poly2D) -> Poly2D {
        let mut out = self.clone();
        out.axpy(-1.0, rhs);
        out
    }
}

impl AddAssign<&Poly2D> for Poly2D {
    fn add_assign(&mut self, rhs: &Poly2D) {
        self.axpy(1.0, rhs);
    }
}

impl Neg for &Poly2D {
    type Output = Poly2D;
    fn neg(self) -> Poly2D {
        self.scaled(-1.0)
    }
}

impl Mul<f64> for &Poly2D {
    type Output = Poly2D;
    fn mul(self, rhs: f64) -> Poly2D {
        self.scaled(rhs)
    }
}

impl Mul<&Poly2D> for &Poly2D {
    type Output = Poly2D;
    fn mul(self, rhs: &Poly2D) -> Poly2D {
        debug_assert_eq!(self.frame, rhs.frame, "frame mismatch");
        let degree = self.degree + rhs.degree;
        let mut out = Poly2D::zero(self.frame, degree);
        for (i, ci) in self.coeffs.iter().enumerate() {
            if *ci == 0.0 {
                continue;
            }
            let (a1, b1) = monomial_exponents_fast(i, self.degree);
            for (j, cj) in rhs.coeffs.iter().enumerate() {
                let (a2, b2) = monomial_exponents_fast(j, rhs.degree);
                out.coeffs[monomial_index(a1 + a2, b1 + b2)] += ci * cj;
            }
        }
        out
    }
}

/// Univariate polynomial in the edge parameter `t ∈ [0, 1]`, monomial basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly1D {
    coeffs: Vec<f64>,
}

impl Poly1D {
    pub fn new(coeffs: Vec<f64>) -> Self {
        let coeffs = if coeffs.is_empty() { vec![0.0] } else { coeffs };
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * t + c)
    }

    pub fn axpy(&mut self, alpha: f64, other: &Poly1D) {
        if other.coeffs.len() > self.coeffs.len() {
            self.coeffs.resize(other.coeffs.len(), 0.0);
        }
        for (s, o) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *s += alpha * o;
        }
    }

    pub fn scaled(&self, alpha: f64) -> Self {
        Self::new(self.coeffs.iter().map(|c| alpha * c).collect())
    }

    /// `d/dt`.
    pub fn deriv(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self::new(vec![0.0]);
        }
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(n, c)| n as f64 * c)
                .collect(),
        )
    }

    /// `p(1 - t)`: the same trace seen with the opposite edge orientation.
    pub fn reflect(&self) -> Self {
        let one_minus_t = Poly1D::new(vec![1.0, -1.0]);
        let mut pow = Poly1D::new(vec![1.0]);
        let mut out = Poly1D::new(vec![0.0; self.coeffs.len()]);
        for c in &self.coeffs {
            out.axpy(*c, &pow);
            pow = &pow * &one_minus_t;
        }
        out
    }

    /// Exact `∫₀¹ p(t) dt`.
    pub fn integral01(&self) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(n, c)| c / (n + 1) as f64)
            .sum()
    }

    /// Exact `∫₀¹ p(t) L_j(t) dt` against the shifted Legendre polynomial.
    pub fn legendre_moment(&self, j: usize) -> f64 {
        (self * &shifted_legendre(j)).integral01()
    }

    /// Largest absolute coefficient.
    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }
}

impl Mul<&Poly1D> for &Poly1D {
    type Output = Poly1D;
    fn mul(self, rhs: &Poly1D) -> Poly1D {
        let mut out = vec![0.0; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly1D::new(out)
    }
}

impl Add<&Poly1D> for &Poly1D {
    type Output = Poly1D;
    fn add(self, rhs: &Poly1D) -> Poly1D {
        let mut out = self.clone();
        out.axpy(1.0, rhs);
        out
    }
}

/// Shifted Legendre polynomial `P_j(2t - 1)` in monomial form.
pub fn shifted_legendre(j: usize) -> Poly1D {
    // P̃_j(t) = Σ_i (-1)^{j+i} C(j,i) C(j+i,i) t^i
    let coeffs = (0..=j)
        .map(|i| {
            let sign = if (j + i).is_multiple_of(2) { 1.0 } else { -1.0 };
            sign * binomial(j, i) * binomial(j + i, i)
        })
        .collect();
    Poly1D::new(coeffs)
}

fn binomial(n: usize, k: usize) -> f64 {
    let mut r = 1.0;
    for i in 0..k {
        r = r * (n - i) as f64 / (i + 1) as f64;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn frame() -> Frame {
        Frame::new(Point::new(0.3, -0.2), 0.7)
    }

    #[test]
    fn index_roundtrip() {
        for i in 0..dim_p(9) {
            let (a, b) = monomial_exponents(i);
            assert_eq!(monomial_index(a, b), i);
            assert_eq!(monomial_exponents_fast(i, 9), (a, b));
        }
        assert_eq!(monomial_exponents(0), (0, 0));
        assert_eq!(monomial_exponents(1), (1, 0));
        assert_eq!(monomial_exponents(2), (0, 1));
        assert_eq!(monomial_exponents(5), (0, 2));
    }

    #[test]
    fn coordinate_evaluates_to_physical_offset() {
        let f = frame();
        let x = Poly2D::coordinate(f, 0);
        let y = Poly2D::coordinate(f, 1);
        let p = Point::new(1.1, 0.4);
        assert_relative_eq!(x.eval(p), 1.1 - 0.3, epsilon = 1e-14);
        assert_relative_eq!(y.eval(p), 0.4 + 0.2, epsilon = 1e-14);
    }

    #[test]
    fn product_and_derivative_agree_with_jet() {
        let f = frame();
        let x = Poly2D::coordinate(f, 0);
        let y = Poly2D::coordinate(f, 1);
        // p = x^3 y + 2 y^2 - x
        let p = &(&(&(&x * &x) * &x) * &y) + &(&(&y * &y) * 2.0);
        let p = &p - &x;
        let pt = Point::new(0.9, 0.1);
        let (dx, dy): (f64, f64) = (0.9 - 0.3, 0.1 + 0.2);
        let j = p.jet(pt);
        assert_relative_eq!(j.value, dx.powi(3) * dy + 2.0 * dy * dy - dx, epsilon = 1e-13);
        assert_relative_eq!(j.grad[0], 3.0 * dx * dx * dy - 1.0, epsilon = 1e-13);
        assert_relative_eq!(j.grad[1], dx.powi(3) + 4.0 * dy, epsilon = 1e-13);
        assert_relative_eq!(j.hess[0], 6.0 * dx * dy, epsilon = 1e-12);
        assert_relative_eq!(j.hess[1], 3.0 * dx * dx, epsilon = 1e-12);
        assert_relative_eq!(j.hess[2], 4.0, epsilon = 1e-12);
        assert_relative_eq!(p.dx().eval(pt), j.grad[0], epsilon = 1e-13);
        assert_relative_eq!(p.dx().dy().eval(pt), j.hess[1], epsilon = 1e-12);
    }

    #[test]
    fn reframe_preserves_values() {
        let f = frame();
        let p = Poly2D::from_coeffs(f, 3, (0..10).map(|i| (i as f64 * 0.37).sin()).collect());
        let g = p.reframe(Frame::new(Point::new(-1.0, 2.0), 2.5));
        for pt in [Point::new(0.0, 0.0), Point::new(0.5, 1.5), Point::new(-2.0, 0.3)] {
            assert_relative_eq!(p.eval(pt), g.eval(pt), epsilon = 1e-11, max_relative = 1e-11);
        }
    }

    #[test]
    fn restriction_matches_pointwise_values() {
        let f = frame();
        let p = Poly2D::from_coeffs(f, 4, (0..15).map(|i| 1.0 / (i as f64 + 1.0)).collect());
        let a = Point::new(0.1, 0.2);
        let b = Point::new(0.8, -0.5);
        let r = p.restrict(a, b);
        assert_eq!(r.degree(), 4);
        for t in [0.0, 0.25, 0.6, 1.0] {
            let x = a + (b - a) * t;
            assert_relative_eq!(r.eval(t), p.eval(x), epsilon = 1e-13);
        }
        let rr = r.reflect();
        assert_relative_eq!(rr.eval(0.3), r.eval(0.7), epsilon = 1e-13);
    }

    #[test]
    fn shifted_legendre_orthogonality() {
        for i in 0..6 {
            for j in 0..6 {
                let v = shifted_legendre(i).legendre_moment(j);
                let expect = if i == j { 1.0 / (2 * i + 1) as f64 } else { 0.0 };
                assert_relative_eq!(v, expect, epsilon = 1e-11);
            }
        }
    }

    #[test]
    fn unit_edge_integral_of_square() {
        // ∫₀¹ t² dt = 1/3
        assert_relative_eq!(Poly1D::new(vec![0.0, 0.0, 1.0]).integral01(), 1.0 / 3.0);
    }
}
