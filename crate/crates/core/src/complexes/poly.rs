//! Exactness of the polynomial complexes on a domain containing the origin:
//!
//! ```text
//! RT ⊂ P_{k+1}(R²) --sym curl--> P_k(S) --div div--> P_{k-2} → 0
//! 0 → P_{k-2} --x xᵀ--> P_k(S) --·x⊥--> P_{k+1}(R²) --π_RT--> RT → 0
//! P₁ ⊂ P_{k+1} --∇²--> P_{k-1}(S) --rot--> P_{k-2}(R²) → 0
//! 0 → P_{k-2}(R²) --sym(x⊥⊗·)--> P_{k-1}(S) --xᵀ·x--> P_{k+1} --π₁--> P₁ → 0
//! ```
//!
//! together with the direct sums `P_k(S) = C_k ⊕ C_k^⊕` and
//! `P_{k-1}(S) = ∇²P_{k+1} ⊕ sym(x⊥ ⊗ P_{k-2}(R²))`.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{columns, composition_residual, max_abs, Check, ComplexReport, IDENTITY_TOL, RANK_TOL};
use crate::error::{Error, Result};
use crate::polyalg::koszul::{pi_1, pi_rt, sym_xperp_outer, xperp_mul, xtx_sandwich, xxt_mul};
use crate::polyalg::{
    basis_of_space, coefficient_matrix, dim_p, hess, numerical_rank, Frame, Poly2D, SpaceTag,
    SymTensorPoly2D, VectorPoly2D,
};

fn scalar_basis(m: usize) -> Vec<Poly2D> {
    (0..dim_p(m)).map(|i| Poly2D::basis(Frame::unit(), i)).collect()
}

fn vector_basis(m: usize) -> Vec<VectorPoly2D> {
    let mut out = Vec::new();
    for i in 0..dim_p(m) {
        for c in 0..2 {
            out.push(VectorPoly2D::unit(Poly2D::basis(Frame::unit(), i), c));
        }
    }
    out
}

fn tensor_basis(m: usize) -> Vec<SymTensorPoly2D> {
    basis_of_space(SpaceTag::Full, m, Frame::unit())
}

fn scalar_cols(ps: &[Poly2D], m: usize) -> DMatrix<f64> {
    columns(&ps.iter().map(|p| p.coeffs_at(m)).collect::<Vec<_>>())
}

fn vector_cols(vs: &[VectorPoly2D], m: usize) -> DMatrix<f64> {
    columns(&vs.iter().map(|v| v.coeffs_at(m)).collect::<Vec<_>>())
}

fn tensor_cols(ts: &[SymTensorPoly2D], m: usize) -> DMatrix<f64> {
    coefficient_matrix(ts, m)
}

/// Runs every polynomial rank identity for one `k` (3 ≤ k ≤ 6).
pub fn check_poly_complexes(k: usize) -> Result<ComplexReport> {
    if !(3..=6).contains(&k) {
        return Err(Error::InvalidParameter(format!("k must lie in 3..=6, got {k}")));
    }
    let mut r = ComplexReport::new(format!("polynomial complexes, k = {k}"));
    divdiv_complex(&mut r, k);
    koszul_complex(&mut r, k);
    hessian_complex(&mut r, k);
    hessian_koszul_complex(&mut r, k);
    decompositions(&mut r, k);
    Ok(r)
}

fn divdiv_complex(r: &mut ComplexReport, k: usize) {
    let vb = vector_basis(k + 1);
    let tb = tensor_basis(k);
    let curls: Vec<SymTensorPoly2D> = vb.iter().map(|v| v.sym_curl()).collect();
    let s = tensor_cols(&curls, k);
    let d = scalar_cols(&tb.iter().map(|t| t.divdiv()).collect::<Vec<_>>(), k.saturating_sub(2));
    let a1 = r.arrow("sym curl: P_{k+1}(R²) → P_k(S)", &s);
    let a2 = r.arrow("div div: P_k(S) → P_{k-2}", &d);
    r.check(Check::equal("kernel of sym curl is RT", 3, a1.kernel_dim));
    r.check(Check::equal("div div onto P_{k-2}", dim_p(k - 2), a2.rank));
    r.check(Check::equal("ker div div = im sym curl", a1.rank, a2.kernel_dim));
    let dd_of_curl = scalar_cols(&curls.iter().map(|t| t.divdiv()).collect::<Vec<_>>(), k - 2);
    r.check(Check::residual(
        "div div ∘ sym curl = 0",
        composition_residual(&dd_of_curl, &s, 1.0),
        IDENTITY_TOL,
    ));
    let fr = Frame::unit();
    let rt = [
        VectorPoly2D::unit(Poly2D::constant(fr, 1.0), 0),
        VectorPoly2D::unit(Poly2D::constant(fr, 1.0), 1),
        VectorPoly2D::new(Poly2D::coordinate(fr, 0), Poly2D::coordinate(fr, 1)),
    ];
    let rt_curl = rt.iter().map(|v| v.sym_curl().max_abs_coeff()).fold(0.0, f64::max);
    r.check(Check::residual("sym curl RT = 0", rt_curl, IDENTITY_TOL));
    let alt = 3 + 3 * dim_p(k) as i64 - 2 * dim_p(k + 1) as i64 - dim_p(k - 2) as i64;
    r.check(Check::equal("alternating dimension sum", 0, alt.unsigned_abs() as usize));
}

fn koszul_complex(r: &mut ComplexReport, k: usize) {
    let sb = scalar_basis(k - 2);
    let tb = tensor_basis(k);
    let vb = vector_basis(k + 1);
    let xxt: Vec<SymTensorPoly2D> = sb.iter().map(xxt_mul).collect();
    let m1 = tensor_cols(&xxt, k);
    let m2 = vector_cols(&tb.iter().map(xperp_mul).collect::<Vec<_>>(), k + 1);
    let m3 = vector_cols(&vb.iter().map(pi_rt).collect::<Vec<_>>(), 1);
    let a1 = r.arrow("x xᵀ: P_{k-2} → P_k(S)", &m1);
    let a2 = r.arrow("τ ↦ τ x⊥: P_k(S) → P_{k+1}(R²)", &m2);
    let a3 = r.arrow("π_RT: P_{k+1}(R²) → RT", &m3);
    r.check(Check::equal("x xᵀ injective", dim_p(k - 2), a1.rank));
    r.check(Check::equal("ker(·x⊥) = im(x xᵀ)", a1.rank, a2.kernel_dim));
    r.check(Check::equal("ker π_RT = im(·x⊥)", a2.rank, a3.kernel_dim));
    r.check(Check::equal("π_RT onto RT", 3, a3.rank));
    let c1 = vector_cols(&xxt.iter().map(xperp_mul).collect::<Vec<_>>(), k + 1);
    r.check(Check::residual(
        "(x xᵀ q) x⊥ = 0",
        composition_residual(&c1, &m1, 1.0),
        IDENTITY_TOL,
    ));
    let c2 = vector_cols(
        &tb.iter().map(|t| pi_rt(&xperp_mul(t))).collect::<Vec<_>>(),
        1,
    );
    r.check(Check::residual("π_RT(τ x⊥) = 0", max_abs(&c2), IDENTITY_TOL));
}

fn hessian_complex(r: &mut ComplexReport, k: usize) {
    let sb = scalar_basis(k + 1);
    let tb = tensor_basis(k - 1);
    let hs: Vec<SymTensorPoly2D> = sb.iter().map(hess).collect();
    let m1 = tensor_cols(&hs, k - 1);
    let m2 = vector_cols(&tb.iter().map(|t| t.rot()).collect::<Vec<_>>(), k - 2);
    let a1 = r.arrow("∇²: P_{k+1} → P_{k-1}(S)", &m1);
    let a2 = r.arrow("rot: P_{k-1}(S) → P_{k-2}(R²)", &m2);
    r.check(Check::equal("kernel of ∇² is P₁", 3, a1.kernel_dim));
    r.check(Check::equal("rot onto P_{k-2}(R²)", 2 * dim_p(k - 2), a2.rank));
    r.check(Check::equal("ker rot = im ∇²", a1.rank, a2.kernel_dim));
    let c = vector_cols(&hs.iter().map(|t| t.rot()).collect::<Vec<_>>(), k - 2);
    r.check(Check::residual(
        "rot ∘ ∇² = 0",
        composition_residual(&c, &m1, 1.0),
        IDENTITY_TOL,
    ));
}

fn hessian_koszul_complex(r: &mut ComplexReport, k: usize) {
    let vb = vector_basis(k - 2);
    let tb = tensor_basis(k - 1);
    let sb = scalar_basis(k + 1);
    let outer: Vec<SymTensorPoly2D> = vb.iter().map(sym_xperp_outer).collect();
    let m1 = tensor_cols(&outer, k - 1);
    let m2 = scalar_cols(&tb.iter().map(xtx_sandwich).collect::<Vec<_>>(), k + 1);
    let m3 = scalar_cols(&sb.iter().map(pi_1).collect::<Vec<_>>(), 1);
    let a1 = r.arrow("sym(x⊥⊗·): P_{k-2}(R²) → P_{k-1}(S)", &m1);
    let a2 = r.arrow("xᵀτx: P_{k-1}(S) → P_{k+1}", &m2);
    let a3 = r.arrow("π₁: P_{k+1} → P₁", &m3);
    r.check(Check::equal("sym(x⊥⊗·) injective", 2 * dim_p(k - 2), a1.rank));
    r.check(Check::equal("ker(xᵀ·x) = im sym(x⊥⊗·)", a1.rank, a2.kernel_dim));
    r.check(Check::equal("ker π₁ = im(xᵀ·x)", a2.rank, a3.kernel_dim));
    r.check(Check::equal("π₁ onto P₁", 3, a3.rank));
    let c1 = scalar_cols(&outer.iter().map(xtx_sandwich).collect::<Vec<_>>(), k + 1);
    r.check(Check::residual(
        "xᵀ sym(x⊥⊗v) x = 0",
        composition_residual(&c1, &m1, 1.0),
        IDENTITY_TOL,
    ));
    let c2 = scalar_cols(&tb.iter().map(|t| pi_1(&xtx_sandwich(t))).collect::<Vec<_>>(), 1);
    r.check(Check::residual("π₁(xᵀτx) = 0", max_abs(&c2), IDENTITY_TOL));
}

fn decompositions(r: &mut ComplexReport, k: usize) {
    let fr = Frame::unit();
    let c = basis_of_space(SpaceTag::SymCurl, k, fr);
    let cp = basis_of_space(SpaceTag::SymCurlComplement, k, fr);
    r.check(Check::equal("dim C_k = k²+5k+3", k * k + 5 * k + 3, numerical_rank(&tensor_cols(&c, k), RANK_TOL)));
    r.check(Check::equal("dim C_k^⊕ = k(k-1)/2", k * (k - 1) / 2, numerical_rank(&tensor_cols(&cp, k), RANK_TOL)));
    let both: Vec<SymTensorPoly2D> = c.iter().chain(&cp).cloned().collect();
    r.check(Check::equal(
        "P_k(S) = C_k ⊕ C_k^⊕",
        3 * dim_p(k),
        numerical_rank(&tensor_cols(&both, k), RANK_TOL),
    ));
    let dd = scalar_cols(&cp.iter().map(|t| t.divdiv()).collect::<Vec<_>>(), k - 2);
    r.check(Check::equal(
        "div div: C_k^⊕ → P_{k-2} bijective",
        dim_p(k - 2),
        numerical_rank(&dd, RANK_TOL),
    ));

    let h = basis_of_space(SpaceTag::Hessian, k + 1, fr);
    let o = basis_of_space(SpaceTag::SymXperpOuter, k - 2, fr);
    let both: Vec<SymTensorPoly2D> = h.iter().chain(&o).map(|t| t.elevate(k - 1)).collect();
    r.check(Check::equal(
        "P_{k-1}(S) = ∇²P_{k+1} ⊕ sym(x⊥⊗P_{k-2}(R²))",
        3 * dim_p(k - 1),
        numerical_rank(&tensor_cols(&both, k - 1), RANK_TOL),
    ));
    let rot = vector_cols(&o.iter().map(|t| t.rot()).collect::<Vec<_>>(), k - 2);
    r.check(Check::equal(
        "rot: sym(x⊥⊗P_{k-2}(R²)) → P_{k-2}(R²) bijective",
        2 * dim_p(k - 2),
        numerical_rank(&rot, RANK_TOL),
    ));
}

/// `div div(x xᵀ q) = (m+3)(m+2) q` for random homogeneous `q` of degree
/// `m ∈ 0..=max_degree`; returns the largest relative coefficient residual.
pub fn check_euler_identity(max_degree: usize, seed: u64) -> ComplexReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut r = ComplexReport::new("x xᵀ homogeneity identity");
    for m in 0..=max_degree {
        let mut coeffs = vec![0.0; dim_p(m)];
        for c in coeffs.iter_mut().skip(dim_p(m) - (m + 1)) {
            *c = rng.gen_range(-1.0..1.0);
        }
        let q = Poly2D::from_coeffs(Frame::unit(), m, coeffs);
        let lhs = xxt_mul(&q).divdiv();
        let rhs = q.scaled(((m + 3) * (m + 2)) as f64);
        let res = (&lhs - &rhs.elevate(lhs.degree())).max_abs_coeff() / rhs.max_abs_coeff();
        r.check(Check::residual(format!("degree {m}"), res, 1e-12));
    }
    r
}
