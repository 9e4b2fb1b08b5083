//! Machine checks of the polynomial, Koszul and finite element complexes,
//! of the commuting interpolations and of the rotated element, by ranks
//! and residuals.

mod commuting;
mod global;
mod local;
mod poly;
mod rotrot;

use std::fmt;

use nalgebra::DMatrix;

pub use commuting::{check_commuting_diagram, CommutingResiduals};
pub use global::check_global_fem_complex;
pub use local::check_local_fem_complexes;
pub use poly::{check_euler_identity, check_poly_complexes};
pub use rotrot::{check_rotrot_identities, ROTROT_DUALITY_TOL, ROTROT_TOL};

use crate::polyalg::numerical_rank;

/// Relative singular-value cutoff for rank decisions.
pub const RANK_TOL: f64 = 1e-8;

/// Tolerance for residuals of exact identities (compositions, inclusions).
pub const IDENTITY_TOL: f64 = 1e-9;

/// Dimension bookkeeping of one linear map.
#[derive(Clone, Debug, PartialEq)]
pub struct ArrowReport {
    pub name: String,
    pub domain_dim: usize,
    pub rank: usize,
    pub kernel_dim: usize,
}

impl ArrowReport {
    /// Rank of a matrix whose columns are the images of a domain basis.
    pub fn from_matrix(name: impl Into<String>, m: &DMatrix<f64>) -> Self {
        Self::with_rank(name, m, numerical_rank(m, RANK_TOL))
    }

    /// Like [`ArrowReport::from_matrix`], with singular values measured
    /// against `reference` (the largest singular value of an enclosing
    /// map) so that a vanishing restriction has rank zero.
    pub fn relative_to(name: impl Into<String>, m: &DMatrix<f64>, reference: f64) -> Self {
        let rank = if m.is_empty() {
            0
        } else {
            let sv = m.clone().svd(false, false).singular_values;
            sv.iter().filter(|&&x| x > RANK_TOL * reference).count()
        };
        Self::with_rank(name, m, rank)
    }

    fn with_rank(name: impl Into<String>, m: &DMatrix<f64>, rank: usize) -> Self {
        Self {
            name: name.into(),
            domain_dim: m.ncols(),
            rank,
            kernel_dim: m.ncols() - rank,
        }
    }
}

/// Outcome of one named verification.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn equal(name: impl Into<String>, expected: usize, observed: usize) -> Self {
        Self {
            name: name.into(),
            passed: expected == observed,
            detail: format!("expected {expected}, observed {observed}"),
        }
    }

    pub fn residual(name: impl Into<String>, value: f64, tol: f64) -> Self {
        Self {
            name: name.into(),
            passed: value <= tol,
            detail: format!("residual {value:.3e} (tolerance {tol:.0e})"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ComplexReport {
    pub title: String,
    pub arrows: Vec<ArrowReport>,
    pub checks: Vec<Check>,
}

impl ComplexReport {
    pub fn new(title: impl Into<String>) -> Self {
        Self {
            title: title.into(),
            ..Default::default()
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    /// Records the arrow and returns its rank.
    fn arrow(&mut self, name: &str, m: &DMatrix<f64>) -> ArrowReport {
        let a = ArrowReport::from_matrix(name, m);
        self.arrows.push(a.clone());
        a
    }

    fn arrow_relative(&mut self, name: &str, m: &DMatrix<f64>, reference: f64) -> ArrowReport {
        let a = ArrowReport::relative_to(name, m, reference);
        self.arrows.push(a.clone());
        a
    }

    fn check(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn merge(&mut self, other: ComplexReport) {
        let prefix = other.title.clone();
        for mut a in other.arrows {
            a.name = format!("{prefix}: {}", a.name);
            self.arrows.push(a);
        }
        for mut c in other.checks {
            c.name = format!("{prefix}: {}", c.name);
            self.checks.push(c);
        }
    }
}

impl fmt::Display for ComplexReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "== {}", self.title)?;
        for a in &self.arrows {
            writeln!(
                f,
                "  {:<40} dim {:>5}  rank {:>5}  kernel {:>5}",
                a.name, a.domain_dim, a.rank, a.kernel_dim
            )?;
        }
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            writeln!(f, "  [{tag}] {}: {}", c.name, c.detail)?;
        }
        Ok(())
    }
}

/// Largest absolute entry.
fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |a, &b| a.max(b.abs()))
}

/// Stacks coefficient vectors as columns.
fn columns(cols: &[Vec<f64>]) -> DMatrix<f64> {
    let rows = cols.first().map_or(0, |c| c.len());
    DMatrix::from_fn(rows, cols.len(), |i, j| cols[j][i])
}

/// `‖composition‖ / (‖second‖·‖first‖)` in max-entry norms; zero when the
/// composite matrix vanishes.
fn composition_residual(composite: &DMatrix<f64>, first: &DMatrix<f64>, second_scale: f64) -> f64 {
    let den = max_abs(first) * second_scale;
    if den == 0.0 {
        max_abs(composite)
    } else {
        max_abs(composite) / den
    }
}
