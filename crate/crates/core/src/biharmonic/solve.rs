//! Sparse direct solution of the mixed and hybridized systems.

use crate::assembly::{
    assemble_hybrid, assemble_mixed, Discretization, GlobalDofMap, HybridSystem, MixedSystem,
};
use crate::error::{Error, Result};
use crate::fields::ScalarField;
use crate::polyalg::{sym_inner, Poly2D, SymTensorPoly2D};
use crate::sparse::{solve_sparse, CooMatrix, SolveInfo};

use super::norms::PiecewisePoly;

/// Required relative residual of the discrete equations.
pub const SOLVE_RESIDUAL_TOL: f64 = 1e-10;

/// Discrete solution. For the hybridized method `sigma` lives in `Σ̃_h`
/// and `lambda` holds the multipliers; otherwise `lambda` is empty.
#[derive(Clone, Debug)]
pub struct Solution {
    pub map: GlobalDofMap,
    pub sigma: Vec<f64>,
    pub u: Vec<f64>,
    pub lambda: Vec<f64>,
    pub info: SolveInfo,
}

impl Solution {
    pub fn sigma_on_cell(&self, disc: &Discretization, cell: usize) -> SymTensorPoly2D {
        disc.sigma_on_cell(&self.map, &self.sigma, cell)
    }

    pub fn u_on_cell(&self, disc: &Discretization, cell: usize) -> Poly2D {
        disc.u_on_cell(&self.u, cell)
    }

    pub fn u_piecewise(&self, disc: &Discretization) -> PiecewisePoly {
        PiecewisePoly {
            cells: (0..disc.mesh.num_cells()).map(|c| self.u_on_cell(disc, c)).collect(),
        }
    }

    /// Coefficients of `σ_h` over the conforming space, taking each shared
    /// DOF from the first incident cell. For a hybrid solution this is the
    /// projection whose agreement with the mixed solution is checked.
    pub fn conforming_sigma(&self, disc: &Discretization) -> Vec<f64> {
        let target = &disc.conforming;
        let mut out = vec![0.0; target.n_sigma];
        let mut seen = vec![false; target.n_sigma];
        for c in 0..disc.mesh.num_cells() {
            let local = disc.local_sigma_coeffs(&self.map, &self.sigma, c);
            for (&(g, f), v) in target.sigma[c].iter().zip(&local) {
                if !seen[g] {
                    out[g] = f * v;
                    seen[g] = true;
                }
            }
        }
        out
    }
}

fn split(x: Vec<f64>, ns: usize, nq: usize) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let sigma = x[..ns].to_vec();
    let u = x[ns..ns + nq].to_vec();
    let lambda = x[ns + nq..].to_vec();
    (sigma, u, lambda)
}

fn solve_kkt(k: &CooMatrix, rhs: &[f64], what: &str) -> Result<(Vec<f64>, SolveInfo)> {
    let (x, info) = solve_sparse(k, rhs)?;
    if info.relative_residual > SOLVE_RESIDUAL_TOL {
        return Err(Error::Residual {
            context: format!("{what} solve"),
            residual: info.relative_residual,
            tol: SOLVE_RESIDUAL_TOL,
        });
    }
    Ok((x, info))
}

pub fn solve_mixed_system(sys: &MixedSystem) -> Result<Solution> {
    let (x, info) = solve_kkt(&sys.kkt(), &sys.rhs(), "mixed")?;
    let (sigma, u, lambda) = split(x, sys.map.n_sigma, sys.map.n_q);
    Ok(Solution {
        map: sys.map.clone(),
        sigma,
        u,
        lambda,
        info,
    })
}

pub fn solve_hybrid_system(sys: &HybridSystem) -> Result<Solution> {
    let (x, info) = solve_kkt(&sys.kkt(), &sys.rhs(), "hybridized")?;
    let (sigma, u, lambda) = split(x, sys.map.n_sigma, sys.map.n_q);
    Ok(Solution {
        map: sys.map.clone(),
        sigma,
        u,
        lambda,
        info,
    })
}

/// Assembles and solves the mixed method for the load `f`.
pub fn solve_mixed(disc: &Discretization, f: &dyn ScalarField, quad_degree: usize) -> Result<Solution> {
    solve_mixed_system(&assemble_mixed(disc, f, quad_degree)?)
}

/// Assembles and solves the hybridized method for the load `f`.
pub fn solve_hybrid(disc: &Discretization, f: &dyn ScalarField, quad_degree: usize) -> Result<Solution> {
    solve_hybrid_system(&assemble_hybrid(disc, f, quad_degree)?)
}

/// Differences between a hybridized and a mixed solution.
#[derive(Clone, Copy, Debug)]
pub struct HybridDeviation {
    /// `‖σ̃_h - σ_h‖₀ / ‖σ_h‖₀`.
    pub sigma_l2: f64,
    /// `‖ũ_h - u_h‖₀ / ‖u_h‖₀`.
    pub u_l2: f64,
    /// Largest conforming-coefficient difference over the largest
    /// coefficient of the mixed solution.
    pub max_coeff: f64,
}

impl HybridDeviation {
    pub fn max(&self) -> f64 {
        self.sigma_l2.max(self.u_l2).max(self.max_coeff)
    }
}

fn rel(num: f64, den: f64) -> f64 {
    if den > 0.0 {
        num / den
    } else {
        num
    }
}

pub fn hybrid_deviation(disc: &Discretization, hybrid: &Solution, mixed: &Solution) -> HybridDeviation {
    let (mut ds, mut ns) = (0.0, 0.0);
    for c in 0..disc.mesh.num_cells() {
        let a = hybrid.sigma_on_cell(disc, c);
        let b = mixed.sigma_on_cell(disc, c);
        let d = &a - &b;
        let tri = disc.mesh.triangle(c);
        ds += sym_inner(&d, &d, &tri);
        ns += sym_inner(&b, &b, &tri);
    }
    // The Q_h basis is orthonormal, so coefficient norms are L² norms.
    let du: f64 = hybrid.u.iter().zip(&mixed.u).map(|(a, b)| (a - b).powi(2)).sum();
    let nu: f64 = mixed.u.iter().map(|a| a * a).sum();
    let hc = hybrid.conforming_sigma(disc);
    let dc = hc
        .iter()
        .zip(&mixed.sigma)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let mc = mixed.sigma.iter().map(|a| a.abs()).fold(0.0, f64::max);
    HybridDeviation {
        sigma_l2: rel(ds.sqrt(), ns.sqrt()),
        u_l2: rel(du.sqrt(), nu.sqrt()),
        max_coeff: rel(dc, mc),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assembly::default_quad_degree;
    use crate::fields::FnScalar;
    use crate::mesh::structured_unit_square;

    #[test]
    fn zero_load_gives_zero_solution() {
        let mesh = structured_unit_square(2).unwrap();
        let disc = Discretization::new(&mesh, 3, 3).unwrap();
        let sol = solve_hybrid(&disc, &FnScalar(|_| 0.0), default_quad_degree(3)).unwrap();
        assert_eq!(sol.lambda.len(), sol.map.n_lambda);
        for v in sol.sigma.iter().chain(&sol.u).chain(&sol.lambda) {
            assert_eq!(*v, 0.0);
        }
    }

    #[test]
    fn hybrid_matches_mixed() {
        let mesh = structured_unit_square(2).unwrap();
        let disc = Discretization::new(&mesh, 3, 3).unwrap();
        let f = FnScalar(|p: crate::geometry::Point| 1.0 + p.x * p.y);
        let qd = default_quad_degree(3);
        let mixed = solve_mixed(&disc, &f, qd).unwrap();
        let hybrid = solve_hybrid(&disc, &f, qd).unwrap();
        assert!(mixed.info.relative_residual < SOLVE_RESIDUAL_TOL);
        assert!(hybrid_deviation(&disc, &hybrid, &mixed).max() < 1e-8);
    }
}
