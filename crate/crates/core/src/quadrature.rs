//! Gauss rules on `[0, 1]` and collapsed-square rules on triangles.

use std::num::NonZeroUsize;
use std::sync::OnceLock;

use gauss_quad::legendre::GaussLegendre;

use crate::geometry::{Point, Segment, Triangle};

const MAX_POINTS: usize = 64;

static GAUSS_01: OnceLock<Vec<Vec<(f64, f64)>>> = OnceLock::new();

/// `n`-point Gauss-Legendre rule mapped to `[0, 1]` (weights sum to 1).
///
/// Exact for polynomials of degree `2n - 1`.
pub fn gauss_01(n: usize) -> &'static [(f64, f64)] {
    assert!(
        (1..=MAX_POINTS).contains(&n),
        "Gauss rule with {n} points is outside the supported table"
    );
    let rules = GAUSS_01.get_or_init(|| {
        (1..=MAX_POINTS)
            .map(|m| {
                let rule = GaussLegendre::new(NonZeroUsize::new(m).unwrap());
                rule.as_node_weight_pairs()
                    .iter()
                    .map(|&(x, w)| (0.5 * (x + 1.0), 0.5 * w))
                    .collect()
            })
            .collect()
    });
    &rules[n - 1]
}

/// Number of Gauss points exact for degree `degree` on a segment.
pub fn points_for_degree(degree: usize) -> usize {
    degree / 2 + 1
}

/// Points and weights on the reference triangle (weights sum to 1/2),
/// exact for total degree `degree`.
///
/// Built from the collapsed map `(u, v) ↦ (u, v(1 - u))`, whose Jacobian
/// `1 - u` raises the degree in `u` by one.
pub fn reference_triangle_rule(degree: usize) -> Vec<(f64, f64, f64)> {
    let nu = points_for_degree(degree + 1);
    let nv = points_for_degree(degree);
    let mut out = Vec::with_capacity(nu * nv);
    for &(u, wu) in gauss_01(nu) {
        for &(v, wv) in gauss_01(nv) {
            out.push((u, v * (1.0 - u), wu * wv * (1.0 - u)));
        }
    }
    out
}

/// Physical quadrature on a triangle.
#[derive(Clone, Debug)]
pub struct TriangleQuadrature {
    pub points: Vec<Point>,
    pub weights: Vec<f64>,
}

impl TriangleQuadrature {
    pub fn new(tri: &Triangle, degree: usize) -> Self {
        let jac = 2.0 * tri.area();
        let rule = reference_triangle_rule(degree);
        let points = rule.iter().map(|&(x, y, _)| tri.map(x, y)).collect();
        let weights = rule.iter().map(|&(_, _, w)| w * jac).collect();
        Self { points, weights }
    }

    pub fn integrate<F: FnMut(Point) -> f64>(&self, mut f: F) -> f64 {
        self.points
            .iter()
            .zip(&self.weights)
            .map(|(p, w)| w * f(*p))
            .sum()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// `∫_e f ds` with an `n`-point Gauss rule; `f` receives the edge parameter
/// `t ∈ [0, 1]` and the physical point.
pub fn integrate_segment<F: FnMut(f64, Point) -> f64>(seg: &Segment, n: usize, mut f: F) -> f64 {
    let h = seg.length();
    gauss_01(n)
        .iter()
        .map(|&(t, w)| w * h * f(t, seg.at(t)))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn factorial(n: usize) -> f64 {
        (1..=n).map(|i| i as f64).product()
    }

    /// Closed-form `∫ x^a y^b` over the reference triangle.
    fn monomial_oracle(a: usize, b: usize) -> f64 {
        factorial(a) * factorial(b) / factorial(a + b + 2)
    }

    #[test]
    fn reference_rule_is_exact_up_to_its_degree() {
        for degree in 0..=14 {
            let rule = reference_triangle_rule(degree);
            for a in 0..=degree {
                for b in 0..=degree - a {
                    let q: f64 = rule
                        .iter()
                        .map(|&(x, y, w)| w * x.powi(a as i32) * y.powi(b as i32))
                        .sum();
                    assert_relative_eq!(q, monomial_oracle(a, b), max_relative = 1e-12);
                }
            }
        }
    }

    #[test]
    fn x3y3_on_unit_triangle() {
        let q = TriangleQuadrature::new(&Triangle::reference(), 6);
        let v = q.integrate(|p| p.x.powi(3) * p.y.powi(3));
        assert_relative_eq!(v, 1.0 / 1120.0, max_relative = 1e-13);
        assert_relative_eq!(monomial_oracle(3, 3), 1.0 / 1120.0, max_relative = 1e-14);
    }

    #[test]
    fn area_and_edge_moments() {
        let k = Triangle::new(Point::new(0.1, 0.0), Point::new(1.3, 0.2), Point::new(0.4, 0.9));
        let q = TriangleQuadrature::new(&k, 0);
        assert_relative_eq!(q.integrate(|_| 1.0), k.area(), max_relative = 1e-14);
        let unit = Segment::new(Point::new(0.0, 0.0), Point::new(1.0, 0.0));
        assert_relative_eq!(integrate_segment(&unit, 2, |t, _| t * t), 1.0 / 3.0, epsilon = 1e-15);
    }
}
