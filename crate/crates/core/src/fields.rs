//! Pointwise-evaluable fields used as inputs to the DOF functionals and the
//! error norms. Derivatives are optional; functionals that need one report
//! [`crate::Error::MissingDerivative`] when it is absent.

use crate::geometry::Point;
use crate::polyalg::{Poly2D, SymTensorPoly2D, VectorPoly2D};

/// Scalar field with optional first and second derivatives.
pub trait ScalarField: Sync {
    fn value(&self, p: Point) -> f64;

    fn gradient(&self, _p: Point) -> Option<[f64; 2]> {
        None
    }

    /// `[∂₁₁, ∂₁₂, ∂₂₂]`.
    fn hessian(&self, _p: Point) -> Option<[f64; 3]> {
        None
    }
}

/// Symmetric tensor field `[τ₁₁, τ₁₂, τ₂₂]` with an optional gradient
/// (`[∂₁τ, ∂₂τ]`, each in the same component layout).
pub trait TensorField: Sync {
    fn value(&self, p: Point) -> [f64; 3];

    fn gradient(&self, _p: Point) -> Option<[[f64; 3]; 2]> {
        None
    }
}

/// Vector field with optional Jacobian (`jac[i][j] = ∂_j v_i`) and second
/// derivatives (`[∂₁₁, ∂₁₂, ∂₂₂]` per component).
pub trait VectorField: Sync {
    fn value(&self, p: Point) -> [f64; 2];

    fn jacobian(&self, _p: Point) -> Option<[[f64; 2]; 2]> {
        None
    }

    fn second_derivatives(&self, _p: Point) -> Option<[[f64; 3]; 2]> {
        None
    }
}

impl ScalarField for Poly2D {
    fn value(&self, p: Point) -> f64 {
        self.eval(p)
    }

    fn gradient(&self, p: Point) -> Option<[f64; 2]> {
        Some(self.jet(p).grad)
    }

    fn hessian(&self, p: Point) -> Option<[f64; 3]> {
        Some(self.jet(p).hess)
    }
}

impl TensorField for SymTensorPoly2D {
    fn value(&self, p: Point) -> [f64; 3] {
        self.eval(p)
    }

    fn gradient(&self, p: Point) -> Option<[[f64; 3]; 2]> {
        let j = self.comps.each_ref().map(|c| c.jet(p).grad);
        Some([
            [j[0][0], j[1][0], j[2][0]],
            [j[0][1], j[1][1], j[2][1]],
        ])
    }
}

impl VectorField for VectorPoly2D {
    fn value(&self, p: Point) -> [f64; 2] {
        self.eval(p)
    }

    fn jacobian(&self, p: Point) -> Option<[[f64; 2]; 2]> {
        Some(self.comps.each_ref().map(|c| c.jet(p).grad))
    }

    fn second_derivatives(&self, p: Point) -> Option<[[f64; 3]; 2]> {
        Some(self.comps.each_ref().map(|c| c.jet(p).hess))
    }
}

/// A tensor field defined by closures.
pub struct FnTensor<F, G = fn(Point) -> [[f64; 3]; 2]> {
    value: F,
    gradient: Option<G>,
}

impl<F> FnTensor<F>
where
    F: Fn(Point) -> [f64; 3] + Sync,
{
    pub fn new(value: F) -> Self {
        Self {
            value,
            gradient: None,
        }
    }
}

impl<F, G> FnTensor<F, G>
where
    F: Fn(Point) -> [f64; 3] + Sync,
    G: Fn(Point) -> [[f64; 3]; 2] + Sync,
{
    pub fn with_gradient(value: F, gradient: G) -> Self {
        Self {
            value,
            gradient: Some(gradient),
        }
    }
}

impl<F, G> TensorField for FnTensor<F, G>
where
    F: Fn(Point) -> [f64; 3] + Sync,
    G: Fn(Point) -> [[f64; 3]; 2] + Sync,
{
    fn value(&self, p: Point) -> [f64; 3] {
        (self.value)(p)
    }

    fn gradient(&self, p: Point) -> Option<[[f64; 3]; 2]> {
        self.gradient.as_ref().map(|g| g(p))
    }
}

/// A scalar field defined by a closure, without derivatives.
pub struct FnScalar<F>(pub F);

impl<F: Fn(Point) -> f64 + Sync> ScalarField for FnScalar<F> {
    fn value(&self, p: Point) -> f64 {
        (self.0)(p)
    }
}

/// `sym curl v` of a vector field, available when `v` provides the
/// derivatives it needs (Jacobian for values, second derivatives for the
/// gradient).
pub struct SymCurlOf<'a, V: ?Sized>(pub &'a V);

impl<V: VectorField + ?Sized> TensorField for SymCurlOf<'_, V> {
    fn value(&self, p: Point) -> [f64; 3] {
        let j = self
            .0
            .jacobian(p)
            .expect("sym curl needs the Jacobian of the vector field");
        [j[0][1], 0.5 * (j[1][1] - j[0][0]), -j[1][0]]
    }

    fn gradient(&self, p: Point) -> Option<[[f64; 3]; 2]> {
        let h = self.0.second_derivatives(p)?;
        // h[i] = [∂₁₁ v_i, ∂₁₂ v_i, ∂₂₂ v_i]
        let dx = [h[0][1], 0.5 * (h[1][1] - h[0][0]), -h[1][0]];
        let dy = [h[0][2], 0.5 * (h[1][2] - h[0][1]), -h[1][1]];
        Some([dx, dy])
    }
}

/// `Aᵀ τ A` of a tensor field.
pub struct Conjugated<'a, T: ?Sized>(pub &'a T);

impl<T: TensorField + ?Sized> TensorField for Conjugated<'_, T> {
    fn value(&self, p: Point) -> [f64; 3] {
        let v = self.0.value(p);
        [v[2], -v[1], v[0]]
    }

    fn gradient(&self, p: Point) -> Option<[[f64; 3]; 2]> {
        self.0
            .gradient(p)
            .map(|g| g.map(|v| [v[2], -v[1], v[0]]))
    }
}

/// `Aᵀ v = (v₂, -v₁)` of a vector field.
pub struct RotatedAt<'a, V: ?Sized>(pub &'a V);

impl<V: VectorField + ?Sized> VectorField for RotatedAt<'_, V> {
    fn value(&self, p: Point) -> [f64; 2] {
        let v = self.0.value(p);
        [v[1], -v[0]]
    }

    fn jacobian(&self, p: Point) -> Option<[[f64; 2]; 2]> {
        self.0.jacobian(p).map(|j| [j[1], [-j[0][0], -j[0][1]]])
    }

    fn second_derivatives(&self, p: Point) -> Option<[[f64; 3]; 2]> {
        self.0
            .second_derivatives(p)
            .map(|h| [h[1], h[0].map(|x| -x)])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::Frame;

    fn sample_vector() -> VectorPoly2D {
        let fr = Frame::new(Point::new(0.2, 0.3), 0.7);
        let a = Poly2D::from_coeffs(fr, 3, (0..10).map(|i| (i as f64 * 0.9).sin()).collect());
        let b = Poly2D::from_coeffs(fr, 3, (0..10).map(|i| (i as f64 * 0.4).cos()).collect());
        VectorPoly2D::new(a, b)
    }

    #[test]
    fn sym_curl_adaptor_matches_polynomial() {
        let v = sample_vector();
        let exact = v.sym_curl();
        let f = SymCurlOf(&v);
        let p = Point::new(0.61, -0.17);
        let (a, b) = (f.value(p), exact.eval(p));
        for i in 0..3 {
            assert!((a[i] - b[i]).abs() < 1e-12);
        }
        let (ga, gb) = (f.gradient(p).unwrap(), TensorField::gradient(&exact, p).unwrap());
        for d in 0..2 {
            for i in 0..3 {
                assert!((ga[d][i] - gb[d][i]).abs() < 1e-11);
            }
        }
    }

    #[test]
    fn rotated_adaptor_matches_polynomial() {
        let v = sample_vector();
        let w = v.rotate_at();
        let f = RotatedAt(&v);
        let p = Point::new(-0.3, 0.8);
        let (ja, jb) = (f.jacobian(p).unwrap(), VectorField::jacobian(&w, p).unwrap());
        let (ha, hb) = (
            f.second_derivatives(p).unwrap(),
            VectorField::second_derivatives(&w, p).unwrap(),
        );
        for i in 0..2 {
            for j in 0..2 {
                assert!((ja[i][j] - jb[i][j]).abs() < 1e-12);
            }
            for j in 0..3 {
                assert!((ha[i][j] - hb[i][j]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn closure_field_without_gradient() {
        let f = FnTensor::new(|p: Point| [p.x, 0.0, p.y]);
        assert_eq!(f.value(Point::new(1.0, 2.0)), [1.0, 0.0, 2.0]);
        assert!(f.gradient(Point::new(0.0, 0.0)).is_none());
    }
}
