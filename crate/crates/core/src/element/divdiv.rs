//! The div-div conforming element with shape space
//! `sym curl P_{ℓ+1}(K; R²) ⊕ x xᵀ P_{k-2}(K)`.

use nalgebra::DMatrix;

use super::dofs::{Anchor, DofFunctional, DofKind, EntityCounts};
use crate::error::{Error, Result};
use crate::fields::TensorField;
use crate::geometry::{Segment, Triangle};
use crate::linalg::{equilibrated_inverse, MAX_DOF_CONDITION};
use crate::polyalg::{
    basis_of_space, dim_p, shifted_legendre, sym_gram, sym_inner, Frame, Poly1D, SpaceTag,
    SymTensorPoly2D,
};
use crate::quadrature::{gauss_01, points_for_degree, TriangleQuadrature};

/// Traces of a tensor polynomial on a segment, as polynomials in the
/// segment parameter `t ∈ [0, 1]`, using the segment's own tangent and its
/// clockwise normal: `(nᵀτn, ∂_t(tᵀτn) + nᵀ div τ)` with `∂_t` the
/// arclength derivative.
pub fn edge_traces(tau: &SymTensorPoly2D, seg: &Segment) -> (Poly1D, Poly1D) {
    let n = seg.normal();
    let t = seg.tangent();
    let nn = tau.contract(n, n).restrict(seg.a, seg.b);
    let tn = tau.contract(t, n).restrict(seg.a, seg.b);
    let mut shear = tn.deriv().scaled(1.0 / seg.length());
    shear.axpy(1.0, &tau.div().restrict_dot(n, seg.a, seg.b));
    (nn, shear)
}

fn validate(l: usize, k: usize) -> Result<()> {
    if k < 3 {
        return Err(Error::InvalidParameter(format!("k must be at least 3, got {k}")));
    }
    if l + 1 < k {
        return Err(Error::InvalidParameter(format!(
            "l must be at least k - 1, got l = {l}, k = {k}"
        )));
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct DivDivElement {
    l: usize,
    k: usize,
    tri: Triangle,
    frame: Frame,
    dofs: Vec<DofFunctional>,
    tests: Vec<SymTensorPoly2D>,
    n_hess: usize,
    shapes: Vec<SymTensorPoly2D>,
    cond: f64,
}

impl DivDivElement {
    /// Dimension of the shape space: `ℓ² + 5ℓ + 3 + k(k-1)/2`.
    pub fn dimension(l: usize, k: usize) -> usize {
        l * l + 5 * l + 3 + k * (k - 1) / 2
    }

    pub fn entity_counts(l: usize, k: usize) -> EntityCounts {
        EntityCounts {
            per_vertex: 3,
            per_edge: 2 * l - 1,
            per_cell: dim_p(k - 2) - 3 + l * (l - 1),
        }
    }

    /// Builds the element and its dual basis on a counterclockwise triangle.
    pub fn new(tri: Triangle, l: usize, k: usize) -> Result<Self> {
        validate(l, k)?;
        if tri.signed_area() <= 0.0 {
            return Err(Error::InvalidMesh("triangle must be counterclockwise".into()));
        }
        let frame = tri.frame();
        let hess = orthonormalize(basis_of_space(SpaceTag::Hessian, k - 2, frame), &tri)?;
        let n_hess = hess.len();
        let mut tests = hess;
        tests.extend(orthonormalize(
            basis_of_space(SpaceTag::SymXperpOuter, l - 2, frame),
            &tri,
        )?);

        let mut dofs = Vec::with_capacity(Self::dimension(l, k));
        for v in 0..3 {
            for component in 0..3 {
                dofs.push(DofFunctional::new(DofKind::VertexValue { component }, Anchor::Vertex(v)));
            }
        }
        for e in 0..3 {
            for moment in 0..l - 1 {
                dofs.push(DofFunctional::new(DofKind::EdgeNN { moment }, Anchor::Edge(e)));
            }
            for moment in 0..l {
                dofs.push(DofFunctional::new(DofKind::EdgeShear { moment }, Anchor::Edge(e)));
            }
        }
        for index in 0..n_hess {
            dofs.push(DofFunctional::new(DofKind::InteriorHess { index }, Anchor::Cell));
        }
        for index in 0..tests.len() - n_hess {
            dofs.push(DofFunctional::new(DofKind::InteriorXperp { index }, Anchor::Cell));
        }

        let mut el = Self {
            l,
            k,
            tri,
            frame,
            dofs,
            tests,
            n_hess,
            shapes: Vec::new(),
            cond: 0.0,
        };
        let space = orthonormalize(Self::space_basis(frame, l, k), &tri)?;
        let n = space.len();
        if n != el.dofs.len() {
            return Err(Error::InvalidParameter(format!(
                "{} DOFs for a {n}-dimensional space",
                el.dofs.len()
            )));
        }
        let mut d = DMatrix::zeros(n, n);
        for (i, b) in space.iter().enumerate() {
            let vals = el.eval_dofs_poly(b);
            d.column_mut(i).copy_from_slice(&vals);
        }
        let (inv, cond) = equilibrated_inverse(&d, "div-div element", MAX_DOF_CONDITION)?;
        let deg = l.max(k);
        el.shapes = (0..n)
            .map(|j| {
                let mut s = SymTensorPoly2D::zero(frame, deg);
                for (m, b) in space.iter().enumerate() {
                    s.axpy(inv[(m, j)], b);
                }
                s
            })
            .collect();
        el.cond = cond;
        Ok(el)
    }

    /// Basis of `C_ℓ ⊕ C_k^⊕` in the given frame, all at degree `max(ℓ, k)`.
    pub fn space_basis(frame: Frame, l: usize, k: usize) -> Vec<SymTensorPoly2D> {
        let deg = l.max(k);
        basis_of_space(SpaceTag::SymCurl, l, frame)
            .into_iter()
            .chain(basis_of_space(SpaceTag::SymCurlComplement, k, frame))
            .map(|t| t.elevate(deg))
            .collect()
    }

    /// Sets the orientation of each local edge relative to the global edge.
    pub fn with_orientation(mut self, signs: [i8; 3]) -> Self {
        for d in &mut self.dofs {
            d.orientation = match d.anchor {
                Anchor::Edge(e) => signs[e],
                _ => 1,
            };
        }
        self
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn degree(&self) -> usize {
        self.l.max(self.k)
    }

    pub fn triangle(&self) -> &Triangle {
        &self.tri
    }

    pub fn frame(&self) -> Frame {
        self.frame
    }

    pub fn dim(&self) -> usize {
        self.dofs.len()
    }

    pub fn dofs(&self) -> &[DofFunctional] {
        &self.dofs
    }

    pub fn shapes(&self) -> &[SymTensorPoly2D] {
        &self.shapes
    }

    pub fn shape(&self, i: usize) -> &SymTensorPoly2D {
        &self.shapes[i]
    }

    /// Condition number of the equilibrated DOF matrix.
    pub fn condition_number(&self) -> f64 {
        self.cond
    }

    /// The interior test tensors (`∇²P_{k-2}` part first).
    pub fn interior_tests(&self) -> &[SymTensorPoly2D] {
        &self.tests
    }

    pub fn vertex_dof(&self, v: usize, component: usize) -> usize {
        3 * v + component
    }

    pub fn edge_nn_dof(&self, e: usize, j: usize) -> usize {
        9 + e * (2 * self.l - 1) + j
    }

    pub fn edge_shear_dof(&self, e: usize, j: usize) -> usize {
        9 + e * (2 * self.l - 1) + self.l - 1 + j
    }

    pub fn interior_dof(&self, m: usize) -> usize {
        9 + 3 * (2 * self.l - 1) + m
    }

    pub fn num_interior_hess(&self) -> usize {
        self.n_hess
    }

    /// DOF values of a polynomial tensor, computed exactly on edge traces.
    pub fn eval_dofs_poly(&self, tau: &SymTensorPoly2D) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.dofs.len());
        for v in &self.tri.vertices {
            out.extend(tau.eval(*v));
        }
        for e in 0..3 {
            let seg = self.tri.edge(e);
            let (nn, shear) = edge_traces(tau, &seg);
            for j in 0..self.l - 1 {
                out.push(nn.legendre_moment(j));
            }
            for j in 0..self.l {
                out.push(seg.length() * shear.legendre_moment(j));
            }
        }
        let area = self.tri.area();
        for s in &self.tests {
            out.push(sym_inner(tau, s, &self.tri) / area);
        }
        out
    }

    /// DOF values of a field, by quadrature. The shear functionals need the
    /// field's gradient.
    pub fn eval_dofs(&self, tau: &dyn TensorField) -> Result<Vec<f64>> {
        let qdeg = 2 * self.degree() + 8;
        let mut out = Vec::with_capacity(self.dofs.len());
        for v in &self.tri.vertices {
            out.extend(tau.value(*v));
        }
        let rule = gauss_01(points_for_degree(qdeg));
        let legendre: Vec<Poly1D> = (0..self.l).map(shifted_legendre).collect();
        for e in 0..3 {
            let seg = self.tri.edge(e);
            let (n, t, len) = (seg.normal(), seg.tangent(), seg.length());
            let mut nn = vec![0.0; self.l - 1];
            let mut sh = vec![0.0; self.l];
            for &(s, w) in rule {
                let p = seg.at(s);
                let val = tau.value(p);
                let nn_val = contract(val, n, n);
                let g = tau
                    .gradient(p)
                    .ok_or(Error::MissingDerivative("the edge shear functional"))?;
                let dt = [0, 1, 2].map(|c| t.x * g[0][c] + t.y * g[1][c]);
                let div = [g[0][0] + g[1][1], g[0][1] + g[1][2]];
                let shear = contract(dt, t, n) + n.x * div[0] + n.y * div[1];
                for j in 0..self.l {
                    let lj = legendre[j].eval(s);
                    if j + 1 < self.l {
                        nn[j] += w * nn_val * lj;
                    }
                    sh[j] += w * shear * lj;
                }
            }
            out.extend(nn);
            out.extend(sh.iter().map(|x| x * len));
        }
        let q = TriangleQuadrature::new(&self.tri, qdeg);
        let vals: Vec<[f64; 3]> = q.points.iter().map(|p| tau.value(*p)).collect();
        let area = self.tri.area();
        for s in &self.tests {
            let mut acc = 0.0;
            for ((p, w), v) in q.points.iter().zip(&q.weights).zip(&vals) {
                let sv = s.eval(*p);
                acc += w * (v[0] * sv[0] + 2.0 * v[1] * sv[1] + v[2] * sv[2]);
            }
            out.push(acc / area);
        }
        Ok(out)
    }

    /// `Σ c_i φ_i`.
    pub fn combine(&self, coeffs: &[f64]) -> SymTensorPoly2D {
        assert_eq!(coeffs.len(), self.shapes.len());
        let mut s = SymTensorPoly2D::zero(self.frame, self.degree());
        for (c, phi) in coeffs.iter().zip(&self.shapes) {
            if *c != 0.0 {
                s.axpy(*c, phi);
            }
        }
        s
    }

    /// Canonical interpolation `Π_K τ` of a polynomial.
    pub fn interpolate_poly(&self, tau: &SymTensorPoly2D) -> SymTensorPoly2D {
        self.combine(&self.eval_dofs_poly(tau))
    }

    /// Canonical interpolation `Π_K τ` of a field.
    pub fn interpolate(&self, tau: &dyn TensorField) -> Result<SymTensorPoly2D> {
        Ok(self.combine(&self.eval_dofs(tau)?))
    }

    /// `max_{i,j} |dof_i(φ_j) - δ_ij|`.
    pub fn duality_error(&self) -> f64 {
        let mut err: f64 = 0.0;
        for (j, phi) in self.shapes.iter().enumerate() {
            for (i, v) in self.eval_dofs_poly(phi).iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                err = err.max((v - target).abs());
            }
        }
        err
    }
}

/// Orthonormal basis of the same span for `(σ, τ)_K / |K|`, so that the
/// interior moments and their dual shape functions stay of unit size.
fn orthonormalize(basis: Vec<SymTensorPoly2D>, tri: &Triangle) -> Result<Vec<SymTensorPoly2D>> {
    if basis.is_empty() {
        return Ok(basis);
    }
    let g = sym_gram(&basis, tri) / tri.area();
    let chol = g
        .cholesky()
        .ok_or_else(|| Error::Solver("interior test Gram matrix is not positive definite".into()))?;
    let linv = chol
        .l()
        .try_inverse()
        .ok_or_else(|| Error::Solver("singular Cholesky factor".into()))?;
    let deg = basis.iter().map(|b| b.degree()).max().unwrap_or(0);
    Ok((0..basis.len())
        .map(|i| {
            let mut t = SymTensorPoly2D::zero(basis[0].frame(), deg);
            for (j, b) in basis.iter().enumerate().take(i + 1) {
                t.axpy(linv[(i, j)], b);
            }
            t
        })
        .collect())
}

fn contract(t: [f64; 3], a: crate::geometry::Point, b: crate::geometry::Point) -> f64 {
    t[0] * a.x * b.x + t[1] * (a.x * b.y + a.y * b.x) + t[2] * a.y * b.y
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::FnTensor;
    use crate::geometry::Point;
    use crate::polyalg::{Poly2D, VectorPoly2D};

    fn tri() -> Triangle {
        Triangle::new(Point::new(0.1, 0.2), Point::new(1.0, 0.0), Point::new(0.3, 0.9))
    }

    fn random_tensor(frame: Frame, deg: usize, seed: f64) -> SymTensorPoly2D {
        let n = dim_p(deg);
        let c = |o: f64| (0..n).map(|i| ((i as f64 + o) * seed).sin()).collect();
        SymTensorPoly2D::new(
            Poly2D::from_coeffs(frame, deg, c(0.3)),
            Poly2D::from_coeffs(frame, deg, c(1.7)),
            Poly2D::from_coeffs(frame, deg, c(2.9)),
        )
    }

    #[test]
    fn dimensions() {
        assert_eq!(DivDivElement::dimension(3, 3), 30);
        assert_eq!(DivDivElement::dimension(2, 3), 20);
        for (l, k) in [(2, 3), (3, 3), (3, 4), (4, 4), (4, 5)] {
            let el = DivDivElement::new(tri(), l, k).unwrap();
            assert_eq!(el.dim(), DivDivElement::dimension(l, k));
            assert_eq!(DivDivElement::entity_counts(l, k).total(), el.dim());
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(DivDivElement::new(tri(), 3, 2).is_err());
        assert!(DivDivElement::new(tri(), 2, 4).is_err());
    }

    #[test]
    fn duality() {
        for (l, k) in [(2, 3), (3, 3)] {
            let el = DivDivElement::new(tri(), l, k).unwrap();
            assert!(el.duality_error() < 1e-8, "l={l} k={k}: {}", el.duality_error());
        }
    }

    #[test]
    fn duality_on_tiny_triangle() {
        let el = DivDivElement::new(tri().scaled(1e-3), 3, 3).unwrap();
        assert!(el.duality_error() < 1e-8);
    }

    #[test]
    fn identity_tensor_dofs() {
        let el = DivDivElement::new(tri(), 3, 3).unwrap();
        let one = FnTensor::with_gradient(|_| [1.0, 0.0, 1.0], |_| [[0.0; 3]; 2]);
        let d = el.eval_dofs(&one).unwrap();
        for e in 0..3 {
            // ∫₀¹ L_0 = 1, ∫₀¹ L_1 = 0
            assert!((d[el.edge_nn_dof(e, 0)] - 1.0).abs() < 1e-13);
            assert!(d[el.edge_nn_dof(e, 1)].abs() < 1e-13);
            for j in 0..3 {
                assert!(d[el.edge_shear_dof(e, j)].abs() < 1e-13);
            }
        }
        assert_eq!(&d[0..3], &[1.0, 0.0, 1.0]);
    }

    #[test]
    fn missing_gradient_is_reported() {
        let el = DivDivElement::new(tri(), 3, 3).unwrap();
        let f = FnTensor::new(|_| [1.0, 0.0, 1.0]);
        assert!(matches!(el.eval_dofs(&f), Err(Error::MissingDerivative(_))));
    }

    #[test]
    fn field_and_polynomial_routes_agree() {
        let el = DivDivElement::new(tri(), 3, 4).unwrap();
        let t = random_tensor(el.frame(), 6, 0.77);
        let a = el.eval_dofs_poly(&t);
        let b = el.eval_dofs(&t).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-10 * (1.0 + x.abs()));
        }
    }

    #[test]
    fn projection_reproduces_low_degree() {
        for (l, k) in [(2, 3), (3, 3), (3, 4)] {
            let el = DivDivElement::new(tri(), l, k).unwrap();
            let t = random_tensor(el.frame(), l.min(k), 0.41);
            let p = el.interpolate_poly(&t);
            assert!((&p - &t).max_abs_coeff() < 1e-9, "l={l} k={k}");
        }
    }

    #[test]
    fn nn_moment_of_sym_curl_matches_tangential_derivative() {
        let el = DivDivElement::new(tri(), 3, 3).unwrap();
        let fr = el.frame();
        let v = VectorPoly2D::new(
            Poly2D::from_coeffs(fr, 2, vec![0.3, -1.0, 0.5, 2.0, 0.1, -0.7]),
            Poly2D::from_coeffs(fr, 2, vec![1.1, 0.4, 0.0, -0.3, 0.9, 0.2]),
        );
        let d = el.eval_dofs_poly(&v.sym_curl());
        for e in 0..3 {
            let seg = el.triangle().edge(e);
            let n = seg.normal();
            // nᵀ ∂_t v along the edge, differentiated independently
            let ntv = v.restrict_dot(n, seg.a, seg.b).deriv().scaled(1.0 / seg.length());
            for j in 0..2 {
                assert!((d[el.edge_nn_dof(e, j)] - ntv.legendre_moment(j)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn zero_interpolates_to_zero() {
        let el = DivDivElement::new(tri(), 3, 3).unwrap();
        let z = SymTensorPoly2D::zero(el.frame(), 2);
        assert!(el.interpolate_poly(&z).max_abs_coeff() == 0.0);
    }
}
