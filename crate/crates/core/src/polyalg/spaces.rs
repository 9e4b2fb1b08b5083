//! Bases of the polynomial tensor spaces used by the elements and the
//! complex checks.
//!
//! Every basis is built from scaled monomials of a [`Frame`], so the
//! coefficients stay O(1) on small cells.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};

use super::koszul::{sym_xperp_outer, sym_x_outer, xperp_xperpt_mul, xxt_mul};
use super::poly::{dim_p, dim_p_signed, Poly2D};
use super::tensor::{curlcurl, hess, SymTensorPoly2D, VectorPoly2D};
use super::Frame;
use crate::error::{Error, Result};

/// Named tensor spaces. The degree parameter is the one used in the
/// space's own definition (see each variant).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SpaceTag {
    /// `sym curl P_{k+1}(R²)`.
    SymCurl,
    /// `x xᵀ P_{k-2}`.
    SymCurlComplement,
    /// `def P_{k+1}(R²)`.
    Def,
    /// `x⊥ x⊥ᵀ P_{k-2}`.
    DefComplement,
    /// `∇² P_m` (argument `m`).
    Hessian,
    /// `curl curl P_m` (argument `m`).
    CurlCurl,
    /// `sym(x⊥ ⊗ P_m(R²))` (argument `m`).
    SymXperpOuter,
    /// `sym(x ⊗ P_m(R²))` (argument `m`).
    SymXOuter,
    /// The full space `P_m(S)`.
    Full,
}

impl SpaceTag {
    pub const ALL: [SpaceTag; 9] = [
        SpaceTag::SymCurl,
        SpaceTag::SymCurlComplement,
        SpaceTag::Def,
        SpaceTag::DefComplement,
        SpaceTag::Hessian,
        SpaceTag::CurlCurl,
        SpaceTag::SymXperpOuter,
        SpaceTag::SymXOuter,
        SpaceTag::Full,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SpaceTag::SymCurl => "symcurl",
            SpaceTag::SymCurlComplement => "xxt",
            SpaceTag::Def => "def",
            SpaceTag::DefComplement => "xperp-xperpt",
            SpaceTag::Hessian => "hess",
            SpaceTag::CurlCurl => "curlcurl",
            SpaceTag::SymXperpOuter => "sym-xperp",
            SpaceTag::SymXOuter => "sym-x",
            SpaceTag::Full => "full",
        }
    }

    /// Dimension predicted by the closed-form count.
    pub fn expected_dim(self, m: usize) -> usize {
        let mi = m as i64;
        match self {
            SpaceTag::SymCurl | SpaceTag::Def => (m + 2) * (m + 3) - 3,
            SpaceTag::SymCurlComplement | SpaceTag::DefComplement => dim_p_signed(mi - 2),
            SpaceTag::Hessian | SpaceTag::CurlCurl => dim_p(m).saturating_sub(3),
            SpaceTag::SymXperpOuter | SpaceTag::SymXOuter => 2 * dim_p(m),
            SpaceTag::Full => 3 * dim_p(m),
        }
    }

    /// Polynomial degree of the tensors in the space.
    pub fn tensor_degree(self, m: usize) -> usize {
        match self {
            SpaceTag::Hessian | SpaceTag::CurlCurl => m.saturating_sub(2),
            SpaceTag::SymXperpOuter | SpaceTag::SymXOuter => m + 1,
            _ => m,
        }
    }
}

impl fmt::Display for SpaceTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SpaceTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SpaceTag::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::UnknownSpace(s.to_string()))
    }
}

/// Scaled vector monomials `s·ξ^a η^b e_i` of degree ≤ `m`, skipping the
/// listed (monomial index, component) pairs.
fn vector_monomials(frame: Frame, m: usize, skip: &[(usize, usize)]) -> Vec<VectorPoly2D> {
    let mut out = Vec::new();
    for i in 0..dim_p(m) {
        for c in 0..2 {
            if skip.contains(&(i, c)) {
                continue;
            }
            let q = Poly2D::basis(frame, i).scaled(frame.scale);
            out.push(VectorPoly2D::unit(q, c));
        }
    }
    out
}

/// Basis of the tagged space with parameter `m` in the given frame.
///
/// The `SymCurl`/`Def` bases apply the operator to vector monomials with the
/// kernel directions removed, so they are linearly independent by
/// construction.
pub fn basis_of_space(tag: SpaceTag, m: usize, frame: Frame) -> Vec<SymTensorPoly2D> {
    let s = frame.scale;
    match tag {
        // ker sym curl = RT, spanned by e₁, e₂ and x; drop e₁, e₂ and the ξ e₁ slot.
        SpaceTag::SymCurl => vector_monomials(frame, m + 1, &[(0, 0), (0, 1), (1, 0)])
            .iter()
            .map(|v| v.sym_curl().elevate(m))
            .collect(),
        // ker def = rigid motions e₁, e₂, x⊥ = (η, -ξ); drop the η e₁ slot.
        SpaceTag::Def => vector_monomials(frame, m + 1, &[(0, 0), (0, 1), (2, 0)])
            .iter()
            .map(|v| v.def().elevate(m))
            .collect(),
        SpaceTag::SymCurlComplement | SpaceTag::DefComplement => {
            if m < 2 {
                return Vec::new();
            }
            (0..dim_p(m - 2))
                .map(|i| {
                    let q = Poly2D::basis(frame, i).scaled(1.0 / (s * s));
                    if tag == SpaceTag::SymCurlComplement {
                        xxt_mul(&q)
                    } else {
                        xperp_xperpt_mul(&q)
                    }
                })
                .collect()
        }
        SpaceTag::Hessian | SpaceTag::CurlCurl => (3..dim_p(m))
            .map(|i| {
                let q = Poly2D::basis(frame, i).scaled(s * s);
                if tag == SpaceTag::Hessian {
                    hess(&q)
                } else {
                    curlcurl(&q)
                }
            })
            .collect(),
        SpaceTag::SymXperpOuter | SpaceTag::SymXOuter => vector_monomials(frame, m, &[])
            .iter()
            .map(|v| {
                let v = v.scaled(1.0 / (s * s));
                if tag == SpaceTag::SymXperpOuter {
                    sym_xperp_outer(&v)
                } else {
                    sym_x_outer(&v)
                }
            })
            .collect(),
        SpaceTag::Full => (0..dim_p(m))
            .flat_map(|i| {
                let q = Poly2D::basis(frame, i);
                (0..3).map(move |slot| SymTensorPoly2D::unit(q.clone(), slot))
            })
            .collect(),
    }
}

/// Numerical rank with a relative singular value cutoff.
pub fn numerical_rank(m: &DMatrix<f64>, rel_tol: f64) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let sv = m.clone().svd(false, false).singular_values;
    let max = sv.iter().cloned().fold(0.0, f64::max);
    if max == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&x| x > rel_tol * max).count()
}

/// Coefficient matrix whose columns are the tensors expanded in the
/// monomial basis of degree `degree`.
pub fn coefficient_matrix(basis: &[SymTensorPoly2D], degree: usize) -> DMatrix<f64> {
    let rows = 3 * dim_p(degree);
    let mut m = DMatrix::zeros(rows, basis.len());
    for (j, t) in basis.iter().enumerate() {
        let c = t.coeffs_at(degree);
        m.column_mut(j).copy_from_slice(&c);
    }
    m
}

/// Rank of a list of tensors, computed from their monomial coefficients.
pub fn span_rank(basis: &[SymTensorPoly2D]) -> usize {
    let deg = basis.iter().map(|b| b.degree()).max().unwrap_or(0);
    numerical_rank(&coefficient_matrix(basis, deg), 1e-10)
}

/// Splits `τ ∈ P_k(S)` as `τ = τ_c + τ_⊕` with `τ_c ∈ sym curl P_{k+1}(R²)`
/// and `τ_⊕ ∈ x xᵀ P_{k-2}`. Returns the pair and the reconstruction
/// residual in the max coefficient norm.
pub fn split_symcurl_decomposition(
    tau: &SymTensorPoly2D,
    k: usize,
) -> Result<(SymTensorPoly2D, SymTensorPoly2D, f64)> {
    if tau.degree() > k {
        return Err(Error::InvalidParameter(format!(
            "tensor of degree {} is not in P_{k}",
            tau.degree()
        )));
    }
    let frame = tau.frame();
    let c = basis_of_space(SpaceTag::SymCurl, k, frame);
    let o = basis_of_space(SpaceTag::SymCurlComplement, k, frame);
    let all: Vec<_> = c.iter().chain(&o).cloned().collect();
    let m = coefficient_matrix(&all, k);
    let rhs = DVector::from_vec(tau.coeffs_at(k));
    let x = m
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::Solver("decomposition matrix is singular".into()))?;
    let mut tc = SymTensorPoly2D::zero(frame, k);
    let mut to = SymTensorPoly2D::zero(frame, k);
    for (j, b) in c.iter().enumerate() {
        tc.axpy(x[j], b);
    }
    for (j, b) in o.iter().enumerate() {
        to.axpy(x[c.len() + j], b);
    }
    let res = (&(&tc + &to) - tau).max_abs_coeff();
    Ok((tc, to, res))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point;

    fn frame() -> Frame {
        Frame::new(Point::new(0.3, 0.7), 0.25)
    }

    #[test]
    fn dims_match_closed_forms() {
        for m in 0..6 {
            for tag in SpaceTag::ALL {
                if matches!(tag, SpaceTag::Hessian | SpaceTag::CurlCurl) && m < 2 {
                    continue;
                }
                let b = basis_of_space(tag, m, frame());
                assert_eq!(b.len(), tag.expected_dim(m), "{tag} m={m}");
                assert_eq!(span_rank(&b), b.len(), "{tag} m={m} not independent");
            }
        }
    }

    #[test]
    fn symcurl_dim_formula() {
        for k in 0..6 {
            assert_eq!(SpaceTag::SymCurl.expected_dim(k), k * k + 5 * k + 3);
        }
    }

    #[test]
    fn tag_roundtrip_and_unknown() {
        for t in SpaceTag::ALL {
            assert_eq!(t.name().parse::<SpaceTag>().unwrap(), t);
        }
        assert!(matches!("nope".parse::<SpaceTag>(), Err(Error::UnknownSpace(_))));
    }

    #[test]
    fn split_recovers_parts() {
        let fr = frame();
        let k = 4;
        let c = basis_of_space(SpaceTag::SymCurl, k, fr);
        let o = basis_of_space(SpaceTag::SymCurlComplement, k, fr);
        let mut a = SymTensorPoly2D::zero(fr, k);
        let mut b = SymTensorPoly2D::zero(fr, k);
        for (i, t) in c.iter().enumerate() {
            a.axpy((i as f64 * 0.37).sin(), t);
        }
        for (i, t) in o.iter().enumerate() {
            b.axpy(1.0 + i as f64, t);
        }
        let (tc, to, res) = split_symcurl_decomposition(&(&a + &b), k).unwrap();
        assert!(res < 1e-12);
        assert!((&tc - &a).max_abs_coeff() < 1e-10);
        assert!((&to - &b).max_abs_coeff() < 1e-10);
    }
}
