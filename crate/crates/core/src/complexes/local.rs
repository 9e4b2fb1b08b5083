//! The element complexes on one triangle:
//!
//! ```text
//! RT ⊂ V_{ℓ+1}(K) --sym curl--> Σ_{ℓ,k}(K) --div div--> P_{k-2}(K) → 0
//! 0 → V̊_{ℓ+1}(K) --sym curl--> Σ̊_{ℓ,k}(K) --div div--> P_{k-2}(K)/P₁(K) → 0
//! ```
//!
//! where the reduced spaces are spanned by the interior shape functions.

use super::{columns, Check, ComplexReport, IDENTITY_TOL, RANK_TOL};
use crate::assembly::orthonormal_basis;
use crate::element::{DivDivElement, HermiteElement};
use crate::error::Result;
use crate::geometry::{Point, Triangle};
use crate::polyalg::{coefficient_matrix, dim_p, numerical_rank, scalar_inner, sym_inner, SymTensorPoly2D};

/// Fixed, deliberately unsymmetric test triangle.
pub(crate) fn test_triangle() -> Triangle {
    Triangle::new(Point::new(0.1, -0.2), Point::new(1.3, 0.15), Point::new(0.45, 0.95))
}

pub fn check_local_fem_complexes(l: usize, k: usize) -> Result<ComplexReport> {
    let tri = test_triangle();
    let el = DivDivElement::new(tri, l, k)?;
    let herm = HermiteElement::new(tri, l)?;
    let mut r = ComplexReport::new(format!("element complexes, l = {l}, k = {k}"));
    let deg = el.degree();
    let qb = orthonormal_basis(&tri, k - 2)?;

    // Full complex.
    let curls: Vec<SymTensorPoly2D> = herm.shapes().iter().map(|v| v.sym_curl()).collect();
    let s = coefficient_matrix(&curls, deg);
    let a1 = r.arrow("sym curl: V_{l+1}(K) → Σ(K)", &s);
    r.check(Check::equal("kernel of sym curl on V(K) is RT", 3, a1.kernel_dim));
    let moments = |t: &SymTensorPoly2D| -> Vec<f64> {
        let d = t.divdiv();
        qb.iter().map(|q| scalar_inner(&d, q, &tri)).collect()
    };
    let d = columns(&el.shapes().iter().map(moments).collect::<Vec<_>>());
    let a2 = r.arrow("div div: Σ(K) → P_{k-2}(K)", &d);
    r.check(Check::equal("div div onto P_{k-2}(K)", dim_p(k - 2), a2.rank));
    r.check(Check::equal("ker div div = im sym curl", a1.rank, a2.kernel_dim));
    let mut both: Vec<SymTensorPoly2D> = el.shapes().to_vec();
    both.extend(curls.iter().cloned());
    r.check(Check::equal(
        "sym curl V(K) ⊆ Σ(K)",
        el.dim(),
        numerical_rank(&coefficient_matrix(&both, deg), RANK_TOL),
    ));
    let alt = 3 + el.dim() as i64 - herm.dim() as i64 - dim_p(k - 2) as i64;
    r.check(Check::equal("alternating dimension sum", 0, alt.unsigned_abs() as usize));

    // Reduced complex on the interior shape functions.
    let first = el.interior_dof(0);
    let sigma0 = &el.shapes()[first..];
    let bubbles = herm.bubble_basis();
    let bcurls: Vec<SymTensorPoly2D> = bubbles.iter().map(|b| b.sym_curl()).collect();
    let a3 = r.arrow("sym curl: V̊(K) → Σ̊(K)", &coefficient_matrix(&bcurls, deg));
    r.check(Check::equal("sym curl injective on V̊(K)", bubbles.len(), a3.rank));
    let mut containment: f64 = 0.0;
    for c in &bcurls {
        let dofs = el.eval_dofs_poly(c);
        let boundary = dofs[..first].iter().fold(0.0_f64, |a, b| a.max(b.abs()));
        let rebuilt = el.combine(&dofs);
        let miss = &rebuilt - c;
        let rel = sym_inner(&miss, &miss, &tri).sqrt() / sym_inner(c, c, &tri).sqrt();
        let scale = dofs.iter().fold(0.0_f64, |a, b| a.max(b.abs()));
        containment = containment.max(rel).max(boundary / scale);
    }
    r.check(Check::residual("sym curl V̊(K) ⊆ Σ̊(K)", containment, IDENTITY_TOL));
    let d0 = columns(&sigma0.iter().map(moments).collect::<Vec<_>>());
    let d_norm = d.clone().svd(false, false).singular_values.max();
    let a4 = r.arrow_relative("div div: Σ̊(K) → P_{k-2}(K)/P₁(K)", &d0, d_norm);
    r.check(Check::equal(
        "dim div div Σ̊(K) = k(k-1)/2 - 3",
        k * (k - 1) / 2 - 3,
        a4.rank,
    ));
    r.check(Check::equal("ker div div on Σ̊(K) = sym curl V̊(K)", a3.rank, a4.kernel_dim));
    // div div Σ̊ is L²-orthogonal to P₁; the first three orthonormal basis
    // functions span P₁.
    let p1_part = (0..sigma0.len())
        .flat_map(|j| (0..3).map(move |a| (a, j)))
        .map(|(a, j)| d0[(a, j)].abs())
        .fold(0.0, f64::max);
    let scale = d.iter().fold(0.0_f64, |a, b| a.max(b.abs()));
    r.check(Check::residual("div div Σ̊(K) ⊥ P₁(K)", p1_part / scale, IDENTITY_TOL));
    let alt0 = sigma0.len() as i64 - bubbles.len() as i64 - (dim_p(k - 2) as i64 - 3);
    r.check(Check::equal("reduced alternating dimension sum", 0, alt0.unsigned_abs() as usize));
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn local_complexes_are_exact() {
        for (l, k) in [(2, 3), (3, 3), (3, 4), (4, 4), (4, 5)] {
            let r = check_local_fem_complexes(l, k).unwrap();
            assert!(r.passed(), "{r}");
        }
    }
}
