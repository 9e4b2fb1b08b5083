//! Manufactured solutions of the clamped plate problem `Δ²u = -f`.

use std::f64::consts::PI;

use crate::fields::{ScalarField, TensorField};
use crate::geometry::Point;

/// An exact solution with hand-coded derivatives. The stress is
/// `σ = -∇²u` and the load `f = -Δ²u`, so that `div div σ = f`.
pub trait ManufacturedCase: Sync {
    fn u(&self, p: Point) -> f64;
    fn grad_u(&self, p: Point) -> [f64; 2];
    /// `[u_xx, u_xy, u_yy]`.
    fn hess_u(&self, p: Point) -> [f64; 3];
    /// `[u_xxx, u_xxy, u_xyy, u_yyy]`.
    fn third_u(&self, p: Point) -> [f64; 4];
    /// `f = -Δ²u`.
    fn load(&self, p: Point) -> f64;
}

/// `u = (sin πx sin πy)²` on the unit square; `u` and `∇u` vanish on the
/// boundary.
#[derive(Clone, Copy, Debug, Default)]
pub struct SinSquared;

/// `a = sin²(πs)` and its first four derivatives.
fn profile(s: f64) -> [f64; 5] {
    let s1 = (PI * s).sin();
    let (s2, c2) = (2.0 * PI * s).sin_cos();
    [
        s1 * s1,
        PI * s2,
        2.0 * PI * PI * c2,
        -4.0 * PI.powi(3) * s2,
        -8.0 * PI.powi(4) * c2,
    ]
}

impl ManufacturedCase for SinSquared {
    fn u(&self, p: Point) -> f64 {
        profile(p.x)[0] * profile(p.y)[0]
    }

    fn grad_u(&self, p: Point) -> [f64; 2] {
        let (a, b) = (profile(p.x), profile(p.y));
        [a[1] * b[0], a[0] * b[1]]
    }

    fn hess_u(&self, p: Point) -> [f64; 3] {
        let (a, b) = (profile(p.x), profile(p.y));
        [a[2] * b[0], a[1] * b[1], a[0] * b[2]]
    }

    fn third_u(&self, p: Point) -> [f64; 4] {
        let (a, b) = (profile(p.x), profile(p.y));
        [a[3] * b[0], a[2] * b[1], a[1] * b[2], a[0] * b[3]]
    }

    fn load(&self, p: Point) -> f64 {
        let (a, b) = (profile(p.x), profile(p.y));
        -(a[4] * b[0] + 2.0 * a[2] * b[2] + a[0] * b[4])
    }
}

/// `u` as a scalar field with first and second derivatives.
pub struct ExactU<'a>(pub &'a dyn ManufacturedCase);

impl ScalarField for ExactU<'_> {
    fn value(&self, p: Point) -> f64 {
        self.0.u(p)
    }

    fn gradient(&self, p: Point) -> Option<[f64; 2]> {
        Some(self.0.grad_u(p))
    }

    fn hessian(&self, p: Point) -> Option<[f64; 3]> {
        Some(self.0.hess_u(p))
    }
}

/// `σ = -∇²u` with its gradient.
pub struct ExactSigma<'a>(pub &'a dyn ManufacturedCase);

impl TensorField for ExactSigma<'_> {
    fn value(&self, p: Point) -> [f64; 3] {
        self.0.hess_u(p).map(|v| -v)
    }

    fn gradient(&self, p: Point) -> Option<[[f64; 3]; 2]> {
        let t = self.0.third_u(p);
        Some([[-t[0], -t[1], -t[2]], [-t[1], -t[2], -t[3]]])
    }
}

/// The load `f`.
pub struct ExactLoad<'a>(pub &'a dyn ManufacturedCase);

impl ScalarField for ExactLoad<'_> {
    fn value(&self, p: Point) -> f64 {
        self.0.load(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts() -> Vec<Point> {
        vec![Point::new(0.13, 0.71), Point::new(0.5, 0.5), Point::new(0.82, 0.27)]
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let c = SinSquared;
        let h = 1e-5;
        for p in pts() {
            let dx = Point::new(h, 0.0);
            let dy = Point::new(0.0, h);
            let g = c.grad_u(p);
            assert!(((c.u(p + dx) - c.u(p - dx)) / (2.0 * h) - g[0]).abs() < 1e-6);
            assert!(((c.u(p + dy) - c.u(p - dy)) / (2.0 * h) - g[1]).abs() < 1e-6);
            let hs = c.hess_u(p);
            let gx = (c.grad_u(p + dx)[0] - c.grad_u(p - dx)[0]) / (2.0 * h);
            let gxy = (c.grad_u(p + dy)[0] - c.grad_u(p - dy)[0]) / (2.0 * h);
            assert!((gx - hs[0]).abs() < 1e-5 && (gxy - hs[1]).abs() < 1e-5);
            let t = c.third_u(p);
            let hxx = (c.hess_u(p + dx)[0] - c.hess_u(p - dx)[0]) / (2.0 * h);
            let hyy = (c.hess_u(p + dy)[2] - c.hess_u(p - dy)[2]) / (2.0 * h);
            assert!((hxx - t[0]).abs() < 1e-4 && (hyy - t[3]).abs() < 1e-4);
        }
    }

    #[test]
    fn divdiv_sigma_equals_load() {
        // div div σ = ∂₁₁σ₁₁ + 2∂₁₂σ₁₂ + ∂₂₂σ₂₂, differentiated from the
        // analytic gradient of σ.
        let c = SinSquared;
        let s = ExactSigma(&c);
        let h = 1e-5;
        for p in pts() {
            let dx = Point::new(h, 0.0);
            let dy = Point::new(0.0, h);
            let gxp = s.gradient(p + dx).unwrap();
            let gxm = s.gradient(p - dx).unwrap();
            let gyp = s.gradient(p + dy).unwrap();
            let gym = s.gradient(p - dy).unwrap();
            let d11 = (gxp[0][0] - gxm[0][0]) / (2.0 * h);
            let d12 = (gyp[0][1] - gym[0][1]) / (2.0 * h);
            let d22 = (gyp[1][2] - gym[1][2]) / (2.0 * h);
            let dd = d11 + 2.0 * d12 + d22;
            assert!((dd - c.load(p)).abs() < 1e-3 * c.load(p).abs().max(1.0), "{dd} vs {}", c.load(p));
        }
    }

    #[test]
    fn clamped_on_boundary() {
        let c = SinSquared;
        for t in [0.0, 0.3, 0.77, 1.0] {
            for p in [Point::new(t, 0.0), Point::new(t, 1.0), Point::new(0.0, t), Point::new(1.0, t)] {
                assert!(c.u(p).abs() < 1e-14);
                let g = c.grad_u(p);
                assert!(g[0].abs() < 1e-12 && g[1].abs() < 1e-12);
            }
        }
    }
}
