//! The vector Hermite element of degree `ℓ+1`: vertex values and gradients,
//! edge moments against `P_{ℓ-3}(e; R²)` and interior moments against
//! `P_{ℓ-2}(K; R²)` in an orthonormal basis.

use nalgebra::DMatrix;

use super::dofs::{Anchor, DofFunctional, DofKind, EntityCounts};
use crate::error::{Error, Result};
use crate::fields::VectorField;
use crate::geometry::Triangle;
use crate::linalg::{equilibrated_inverse, MAX_DOF_CONDITION};
use crate::polyalg::{dim_p, orthonormal_basis, scalar_inner, shifted_legendre, Frame, Poly1D, Poly2D, VectorPoly2D};
use crate::quadrature::{gauss_01, points_for_degree, TriangleQuadrature};

#[derive(Clone, Debug)]
pub struct HermiteElement {
    l: usize,
    tri: Triangle,
    frame: Frame,
    dofs: Vec<DofFunctional>,
    /// Interior test polynomials, orthonormal for `(p, q)_K / |K|`.
    interior: Vec<Poly2D>,
    shapes: Vec<VectorPoly2D>,
    cond: f64,
}

impl HermiteElement {
    /// `(ℓ+2)(ℓ+3)`.
    pub fn dimension(l: usize) -> usize {
        (l + 2) * (l + 3)
    }

    pub fn entity_counts(l: usize) -> EntityCounts {
        EntityCounts {
            per_vertex: 6,
            per_edge: 2 * (l - 2),
            per_cell: 2 * dim_p(l - 2),
        }
    }

    /// Builds the element of degree `l + 1`.
    pub fn new(tri: Triangle, l: usize) -> Result<Self> {
        if l < 2 {
            return Err(Error::InvalidParameter(format!("l must be at least 2, got {l}")));
        }
        if tri.signed_area() <= 0.0 {
            return Err(Error::InvalidMesh("triangle must be counterclockwise".into()));
        }
        let frame = tri.frame();
        let mut dofs = Vec::new();
        for v in 0..3 {
            for component in 0..2 {
                dofs.push(DofFunctional::new(
                    DofKind::HermiteVertexValue { component },
                    Anchor::Vertex(v),
                ));
            }
            for component in 0..2 {
                for direction in 0..2 {
                    dofs.push(DofFunctional::new(
                        DofKind::HermiteVertexGrad {
                            component,
                            direction,
                        },
                        Anchor::Vertex(v),
                    ));
                }
            }
        }
        for e in 0..3 {
            for component in 0..2 {
                for moment in 0..l - 2 {
                    dofs.push(DofFunctional::new(
                        DofKind::HermiteEdge { component, moment },
                        Anchor::Edge(e),
                    ));
                }
            }
        }
        for component in 0..2 {
            for index in 0..dim_p(l - 2) {
                dofs.push(DofFunctional::new(
                    DofKind::HermiteInterior { component, index },
                    Anchor::Cell,
                ));
            }
        }

        let root = tri.area().sqrt();
        let interior = orthonormal_basis(&tri, l - 2)?.iter().map(|p| p.scaled(root)).collect();
        let mut el = Self {
            l,
            tri,
            frame,
            dofs,
            interior,
            shapes: Vec::new(),
            cond: 0.0,
        };
        let deg = l + 1;
        let space: Vec<VectorPoly2D> = (0..2)
            .flat_map(|c| (0..dim_p(deg)).map(move |i| VectorPoly2D::unit(Poly2D::basis(frame, i), c)))
            .collect();
        let n = space.len();
        debug_assert_eq!(n, el.dofs.len());
        let mut d = DMatrix::zeros(n, n);
        for (i, b) in space.iter().enumerate() {
            d.column_mut(i).copy_from_slice(&el.eval_dofs_poly(b));
        }
        let (inv, cond) = equilibrated_inverse(&d, "Hermite element", MAX_DOF_CONDITION)?;
        el.shapes = (0..n)
            .map(|j| {
                let mut s = VectorPoly2D::zero(frame, deg);
                for (m, b) in space.iter().enumerate() {
                    s.axpy(inv[(m, j)], b);
                }
                s
            })
            .collect();
        el.cond = cond;
        Ok(el)
    }

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

    pub fn degree(&self) -> usize {
        self.l + 1
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

    pub fn shapes(&self) -> &[VectorPoly2D] {
        &self.shapes
    }

    pub fn condition_number(&self) -> f64 {
        self.cond
    }

    /// Indices of the interior DOFs; their dual functions span the bubble
    /// space `V̊_{ℓ+1}(K)`.
    pub fn interior_indices(&self) -> std::ops::Range<usize> {
        let start = 18 + 6 * (self.l - 2);
        start..self.dofs.len()
    }

    pub fn bubble_basis(&self) -> &[VectorPoly2D] {
        &self.shapes[self.interior_indices()]
    }

    pub fn eval_dofs_poly(&self, v: &VectorPoly2D) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.dofs.len());
        let jac: Vec<Poly2D> = v.comps.iter().flat_map(|c| [c.dx(), c.dy()]).collect();
        for p in &self.tri.vertices {
            out.extend(v.eval(*p));
            out.extend(jac.iter().map(|d| d.eval(*p)));
        }
        for e in 0..3 {
            let seg = self.tri.edge(e);
            for c in &v.comps {
                let r = c.restrict(seg.a, seg.b);
                for j in 0..self.l - 2 {
                    out.push(r.legendre_moment(j));
                }
            }
        }
        let area = self.tri.area();
        for c in &v.comps {
            for q in &self.interior {
                out.push(scalar_inner(c, q, &self.tri) / area);
            }
        }
        out
    }

    /// DOF values of a vector field by quadrature; needs the Jacobian.
    pub fn eval_dofs(&self, v: &dyn VectorField) -> Result<Vec<f64>> {
        let qdeg = 2 * self.degree() + 8;
        let mut out = Vec::with_capacity(self.dofs.len());
        for p in &self.tri.vertices {
            out.extend(v.value(*p));
            let j = v
                .jacobian(*p)
                .ok_or(Error::MissingDerivative("the Hermite vertex gradient"))?;
            out.extend([j[0][0], j[0][1], j[1][0], j[1][1]]);
        }
        let rule = gauss_01(points_for_degree(qdeg));
        let legendre: Vec<Poly1D> = (0..self.l.saturating_sub(2)).map(shifted_legendre).collect();
        for e in 0..3 {
            let seg = self.tri.edge(e);
            let mut m = vec![[0.0; 2]; self.l - 2];
            for &(s, w) in rule {
                let val = v.value(seg.at(s));
                for (j, lj) in legendre.iter().enumerate() {
                    let lw = w * lj.eval(s);
                    m[j][0] += lw * val[0];
                    m[j][1] += lw * val[1];
                }
            }
            for c in 0..2 {
                out.extend(m.iter().map(|x| x[c]));
            }
        }
        let q = TriangleQuadrature::new(&self.tri, qdeg);
        let vals: Vec<[f64; 2]> = q.points.iter().map(|p| v.value(*p)).collect();
        let area = self.tri.area();
        for c in 0..2 {
            for test in &self.interior {
                let mut acc = 0.0;
                for ((p, w), val) in q.points.iter().zip(&q.weights).zip(&vals) {
                    acc += w * val[c] * test.eval(*p);
                }
                out.push(acc / area);
            }
        }
        Ok(out)
    }

    pub fn combine(&self, coeffs: &[f64]) -> VectorPoly2D {
        assert_eq!(coeffs.len(), self.shapes.len());
        let mut s = VectorPoly2D::zero(self.frame, self.degree());
        for (c, phi) in coeffs.iter().zip(&self.shapes) {
            if *c != 0.0 {
                s.axpy(*c, phi);
            }
        }
        s
    }

    pub fn interpolate_poly(&self, v: &VectorPoly2D) -> VectorPoly2D {
        self.combine(&self.eval_dofs_poly(v))
    }

    pub fn interpolate(&self, v: &dyn VectorField) -> Result<VectorPoly2D> {
        Ok(self.combine(&self.eval_dofs(v)?))
    }

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
