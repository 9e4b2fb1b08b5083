//! Degree-of-freedom descriptors.

use std::fmt;

/// Which linear functional a DOF is. Edge moments use shifted Legendre
/// polynomials in the edge parameter; `moment` is the Legendre degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DofKind {
    /// `τ(δ)` component `0 ↦ τ₁₁`, `1 ↦ τ₁₂`, `2 ↦ τ₂₂`.
    VertexValue { component: usize },
    /// `∫₀¹ nᵀτn L_j dt`.
    EdgeNN { moment: usize },
    /// `|e| ∫₀¹ (∂_t(tᵀτn) + nᵀdiv τ) L_j dt`.
    EdgeShear { moment: usize },
    /// `|K|⁻¹ (τ, ∇²q)_K` for the `index`-th scaled monomial `q` of degree ≥ 2.
    InteriorHess { index: usize },
    /// `|K|⁻¹ (τ, sym(x⊥ ⊗ q))_K` for the `index`-th vector monomial `q`.
    InteriorXperp { index: usize },
    /// `v_c(δ)`.
    HermiteVertexValue { component: usize },
    /// `∂_d v_c(δ)`.
    HermiteVertexGrad { component: usize, direction: usize },
    /// `∫₀¹ v_c L_j dt`.
    HermiteEdge { component: usize, moment: usize },
    /// `|K|⁻¹ (v_c, q)_K` for the `index`-th scaled monomial `q`.
    HermiteInterior { component: usize, index: usize },
}

/// The local entity a DOF is attached to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Anchor {
    Vertex(usize),
    Edge(usize),
    Cell,
}

/// A DOF of a local element. `orientation` is the sign of the local edge
/// relative to the global edge orientation (`+1` for vertex and cell DOFs).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DofFunctional {
    pub kind: DofKind,
    pub anchor: Anchor,
    pub orientation: i8,
}

impl DofFunctional {
    pub fn new(kind: DofKind, anchor: Anchor) -> Self {
        Self {
            kind,
            anchor,
            orientation: 1,
        }
    }

    /// Factor `f` with `global functional = f · local functional`.
    ///
    /// Local functionals use the counterclockwise edge direction and the
    /// outward normal. Reversing the edge maps `L_j(t)` to `(-1)^j L_j(t)`
    /// and flips the sign of the shear trace.
    pub fn global_factor(&self) -> f64 {
        if self.orientation > 0 {
            return 1.0;
        }
        let odd = |j: usize| if j.is_multiple_of(2) { 1.0 } else { -1.0 };
        match self.kind {
            DofKind::EdgeNN { moment } => odd(moment),
            DofKind::EdgeShear { moment } => -odd(moment),
            DofKind::HermiteEdge { moment, .. } => odd(moment),
            _ => 1.0,
        }
    }

    pub fn is_interior(&self) -> bool {
        self.anchor == Anchor::Cell
    }
}

impl fmt::Display for DofFunctional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let at = match self.anchor {
            Anchor::Vertex(i) => format!("vertex {i}"),
            Anchor::Edge(i) => format!("edge {i}"),
            Anchor::Cell => "cell".to_string(),
        };
        write!(f, "{:?} @ {at}", self.kind)
    }
}

/// Counts of DOFs per entity type.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EntityCounts {
    pub per_vertex: usize,
    pub per_edge: usize,
    pub per_cell: usize,
}

impl EntityCounts {
    pub fn total(&self) -> usize {
        3 * self.per_vertex + 3 * self.per_edge + self.per_cell
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reversed_edge_factors() {
        let f = |kind| DofFunctional {
            kind,
            anchor: Anchor::Edge(0),
            orientation: -1,
        };
        assert_eq!(f(DofKind::EdgeNN { moment: 0 }).global_factor(), 1.0);
        assert_eq!(f(DofKind::EdgeNN { moment: 1 }).global_factor(), -1.0);
        assert_eq!(f(DofKind::EdgeShear { moment: 0 }).global_factor(), -1.0);
        assert_eq!(f(DofKind::EdgeShear { moment: 1 }).global_factor(), 1.0);
        let mut v = f(DofKind::VertexValue { component: 1 });
        v.anchor = Anchor::Vertex(2);
        assert_eq!(v.global_factor(), 1.0);
    }
}
