//! Polynomial algebra: scalar, vector and symmetric-tensor polynomials, the
//! differential and Koszul operators acting on them, and named bases.

pub mod integrate;
pub mod koszul;
pub mod poly;
pub mod spaces;
pub mod tensor;

pub use integrate::{integrate_edge, integrate_triangle, monomial_gram, orthonormal_basis, scalar_inner, sym_gram, sym_inner};
pub use poly::{dim_p, dim_p_signed, monomial_exponents, monomial_index, shifted_legendre, Frame, Jet, Poly1D, Poly2D};
pub use spaces::{basis_of_space, coefficient_matrix, numerical_rank, span_rank, split_symcurl_decomposition, SpaceTag};
pub use tensor::{curl, curlcurl, grad, hess, SymTensorPoly2D, VectorPoly2D};
