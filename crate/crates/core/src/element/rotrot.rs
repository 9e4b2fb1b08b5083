//! The rotated element for `H(rot rot; S)`, obtained from the div-div
//! element by the conjugation `τ ↦ Aᵀ τ A`.
//!
//! Since `rot rot τ = div div(Aᵀ τ A)` and `def v = A sym curl(Aᵀ v) Aᵀ`,
//! the shape functions, DOFs and interpolations all transfer through the
//! conjugation.

use super::divdiv::DivDivElement;
use super::hermite::HermiteElement;
use super::interpolate_commuting_poly;
use crate::error::Result;
use crate::fields::{Conjugated, TensorField};
use crate::polyalg::{SymTensorPoly2D, VectorPoly2D};

#[derive(Clone, Debug)]
pub struct RotRotElement {
    base: DivDivElement,
    shapes: Vec<SymTensorPoly2D>,
}

impl RotRotElement {
    pub fn new(base: DivDivElement) -> Self {
        let shapes = base.shapes().iter().map(|s| s.conjugate()).collect();
        Self { base, shapes }
    }

    pub fn base(&self) -> &DivDivElement {
        &self.base
    }

    pub fn shapes(&self) -> &[SymTensorPoly2D] {
        &self.shapes
    }

    pub fn dim(&self) -> usize {
        self.shapes.len()
    }

    /// DOFs of the rotated element: the div-div DOFs of `Aᵀ τ A`.
    pub fn eval_dofs_poly(&self, tau: &SymTensorPoly2D) -> Vec<f64> {
        self.base.eval_dofs_poly(&tau.conjugate())
    }

    pub fn eval_dofs(&self, tau: &dyn TensorField) -> Result<Vec<f64>> {
        self.base.eval_dofs(&Conjugated(tau))
    }

    pub fn combine(&self, coeffs: &[f64]) -> SymTensorPoly2D {
        self.base.combine(coeffs).conjugate()
    }

    /// `Π⊥_K τ = Aᵀ Π_K(Aᵀ τ A) A`.
    pub fn interpolate_poly(&self, tau: &SymTensorPoly2D) -> SymTensorPoly2D {
        self.combine(&self.eval_dofs_poly(tau))
    }

    pub fn interpolate(&self, tau: &dyn TensorField) -> Result<SymTensorPoly2D> {
        Ok(self.combine(&self.eval_dofs(tau)?))
    }

    /// `I⊥_K v = A I_K(Aᵀ v)`, satisfying `def I⊥_K v = Π⊥_K def v`.
    pub fn interpolate_vector_poly(
        &self,
        herm: &HermiteElement,
        v: &VectorPoly2D,
    ) -> Result<VectorPoly2D> {
        Ok(interpolate_commuting_poly(herm, &self.base, &v.rotate_at())?.rotate_a())
    }
}
