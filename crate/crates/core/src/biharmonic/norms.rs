//! Piecewise functions and the mesh-dependent norm `|·|_{2,h}`.

use rayon::prelude::*;

use crate::fields::ScalarField;
use crate::geometry::Point;
use crate::mesh::TriMesh;
use crate::polyalg::{Jet, Poly2D};
use crate::quadrature::{gauss_01, points_for_degree, TriangleQuadrature};

/// A function given cell by cell, with second derivatives.
pub trait Piecewise: Sync {
    fn jet(&self, cell: usize, p: Point) -> Jet;
}

/// One polynomial per cell.
#[derive(Clone, Debug)]
pub struct PiecewisePoly {
    pub cells: Vec<Poly2D>,
}

impl Piecewise for PiecewisePoly {
    fn jet(&self, cell: usize, p: Point) -> Jet {
        self.cells[cell].jet(p)
    }
}

/// `field - pw`; the field must provide gradient and Hessian.
pub struct Difference<'a> {
    pub field: &'a dyn ScalarField,
    pub pw: &'a dyn Piecewise,
}

impl Piecewise for Difference<'_> {
    fn jet(&self, cell: usize, p: Point) -> Jet {
        let j = self.pw.jet(cell, p);
        let g = self
            .field
            .gradient(p)
            .expect("the mesh-dependent norm needs the field gradient");
        let h = self
            .field
            .hessian(p)
            .expect("the mesh-dependent norm needs the field Hessian");
        Jet {
            value: self.field.value(p) - j.value,
            grad: [g[0] - j.grad[0], g[1] - j.grad[1]],
            hess: [h[0] - j.hess[0], h[1] - j.hess[1], h[2] - j.hess[2]],
        }
    }
}

/// The terms of `|v|²_{2,h}`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Norm2hParts {
    /// `Σ_K |v|²_{2,K}`.
    pub broken_h2: f64,
    /// `Σ_e h_e⁻³ ‖[v]‖²_e`.
    pub value_jumps: f64,
    /// `Σ_e h_e⁻¹ ‖[∂_n v]‖²_e`.
    pub normal_jumps: f64,
}

impl Norm2hParts {
    pub fn total(&self) -> f64 {
        (self.broken_h2 + self.value_jumps + self.normal_jumps).sqrt()
    }
}

/// `|v|_{2,h}` with quadrature exact to degree `quad_degree`. On boundary
/// edges the jump is the one-sided trace.
pub fn norm_2h(mesh: &TriMesh, v: &dyn Piecewise, quad_degree: usize) -> f64 {
    norm_2h_parts(mesh, v, quad_degree).total()
}

pub fn norm_2h_parts(mesh: &TriMesh, v: &dyn Piecewise, quad_degree: usize) -> Norm2hParts {
    let broken_h2 = (0..mesh.num_cells())
        .into_par_iter()
        .map(|c| {
            let q = TriangleQuadrature::new(&mesh.triangle(c), quad_degree);
            q.points
                .iter()
                .zip(&q.weights)
                .map(|(p, w)| {
                    let h = v.jet(c, *p).hess;
                    w * (h[0] * h[0] + 2.0 * h[1] * h[1] + h[2] * h[2])
                })
                .sum::<f64>()
        })
        .sum();
    let rule = gauss_01(points_for_degree(quad_degree));
    let (value_jumps, normal_jumps) = (0..mesh.num_edges())
        .into_par_iter()
        .map(|e| {
            let seg = mesh.segment(e);
            let n = mesh.edge_normal(e);
            let he = seg.length();
            let cells: Vec<usize> = mesh.edge_cells(e).iter().flatten().copied().collect();
            let (mut jv, mut jn) = (0.0, 0.0);
            for &(t, w) in rule {
                let p = seg.at(t);
                let mut a = mesh_jets(v, &cells, p).into_iter();
                let first = a.next().expect("edge without cells");
                let (mut dv, mut dn) = (first.value, first.grad[0] * n.x + first.grad[1] * n.y);
                for j in a {
                    dv -= j.value;
                    dn -= j.grad[0] * n.x + j.grad[1] * n.y;
                }
                jv += w * dv * dv;
                jn += w * dn * dn;
            }
            (jv * he / he.powi(3), jn * he / he)
        })
        .reduce(|| (0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1));
    Norm2hParts {
        broken_h2,
        value_jumps,
        normal_jumps,
    }
}

fn mesh_jets(v: &dyn Piecewise, cells: &[usize], p: Point) -> Vec<Jet> {
    cells.iter().map(|&c| v.jet(c, p)).collect()
}

/// `‖v‖_{0,Ω}` of a piecewise function.
pub fn l2_norm(mesh: &TriMesh, v: &dyn Piecewise, quad_degree: usize) -> f64 {
    (0..mesh.num_cells())
        .into_par_iter()
        .map(|c| {
            TriangleQuadrature::new(&mesh.triangle(c), quad_degree).integrate(|p| v.jet(c, p).value.powi(2))
        })
        .sum::<f64>()
        .sqrt()
}
