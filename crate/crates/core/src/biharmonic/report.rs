//! Error norms against a manufactured solution and observed rates.

use rayon::prelude::*;

use crate::assembly::{default_quad_degree, Discretization};
use crate::error::Result;
use crate::fields::TensorField;
use crate::mesh::TriMesh;
use crate::quadrature::TriangleQuadrature;

use super::exact::{ExactLoad, ExactSigma, ExactU, ManufacturedCase};
use super::norms::{norm_2h, Difference, PiecewisePoly};
use super::postprocess::postprocess_ustar;
use super::solve::{hybrid_deviation, solve_hybrid, solve_mixed, HybridDeviation, Solution};

/// One row of a convergence table.
#[derive(Clone, Debug, PartialEq)]
pub struct ErrorReport {
    pub h: f64,
    /// `dim Σ_h + dim Q_h (+ dim Λ_h)` of the solved system.
    pub dofs: usize,
    pub sigma_l2: f64,
    pub divdiv: f64,
    pub u_l2: f64,
    pub qhu_l2: f64,
    pub qhu_2h: f64,
    pub ustar_2h: Option<f64>,
}

impl ErrorReport {
    pub const COLUMNS: [&'static str; 8] = [
        "h",
        "dofs",
        "err_sigma_L2",
        "err_divdiv",
        "err_u_L2",
        "err_Qhu_L2",
        "err_Qhu_2h",
        "err_ustar_2h",
    ];

    /// The error columns, in [`ErrorReport::COLUMNS`] order after `dofs`.
    pub fn errors(&self) -> [Option<f64>; 6] {
        [
            Some(self.sigma_l2),
            Some(self.divdiv),
            Some(self.u_l2),
            Some(self.qhu_l2),
            Some(self.qhu_2h),
            self.ustar_2h,
        ]
    }
}

/// Computes the error norms; `ustar` is included when given.
pub fn error_report(
    disc: &Discretization,
    sol: &Solution,
    case: &dyn ManufacturedCase,
    ustar: Option<&PiecewisePoly>,
    quad_degree: usize,
) -> ErrorReport {
    let mesh = disc.mesh;
    let sigma = ExactSigma(case);
    let (sigma_sq, divdiv_sq, u_sq) = (0..mesh.num_cells())
        .into_par_iter()
        .map(|c| {
            let q = TriangleQuadrature::new(&mesh.triangle(c), quad_degree);
            let sh = sol.sigma_on_cell(disc, c);
            let dd = sh.divdiv();
            let uh = sol.u_on_cell(disc, c);
            let (mut es, mut ed, mut eu) = (0.0, 0.0, 0.0);
            for (p, w) in q.points.iter().zip(&q.weights) {
                let s = sigma.value(*p);
                let t = sh.eval(*p);
                let d = [s[0] - t[0], s[1] - t[1], s[2] - t[2]];
                es += w * (d[0] * d[0] + 2.0 * d[1] * d[1] + d[2] * d[2]);
                ed += w * (case.load(*p) - dd.eval(*p)).powi(2);
                eu += w * (case.u(*p) - uh.eval(*p)).powi(2);
            }
            (es, ed, eu)
        })
        .reduce(|| (0.0, 0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1, a.2 + b.2));

    let qhu = disc.project_q(&ExactU(case), quad_degree);
    let diff: Vec<f64> = qhu.iter().zip(&sol.u).map(|(a, b)| a - b).collect();
    // Orthonormal Q_h basis: the coefficient norm is the L² norm.
    let qhu_l2 = diff.iter().map(|d| d * d).sum::<f64>().sqrt();
    let diff_pw = PiecewisePoly {
        cells: (0..mesh.num_cells()).map(|c| disc.u_on_cell(&diff, c)).collect(),
    };
    let qhu_2h = norm_2h(mesh, &diff_pw, quad_degree);
    let ustar_2h = ustar.map(|us| {
        norm_2h(
            mesh,
            &Difference {
                field: &ExactU(case),
                pw: us,
            },
            quad_degree,
        )
    });
    ErrorReport {
        h: mesh.h(),
        dofs: sol.map.n_total(),
        sigma_l2: sigma_sq.sqrt(),
        divdiv: divdiv_sq.sqrt(),
        u_l2: u_sq.sqrt(),
        qhu_l2,
        qhu_2h,
        ustar_2h,
    }
}

/// `log(e₀/e₁) / log(h₀/h₁)` for each successive pair.
pub fn rates(h: &[f64], e: &[f64]) -> Vec<f64> {
    h.windows(2)
        .zip(e.windows(2))
        .map(|(h, e)| (e[0] / e[1]).ln() / (h[0] / h[1]).ln())
        .collect()
}

/// Rates of every column of a table; `None` where a column is missing.
pub fn report_rates(rows: &[ErrorReport]) -> Vec<[Option<f64>; 6]> {
    rows.windows(2)
        .map(|w| {
            let (a, b) = (w[0].errors(), w[1].errors());
            let mut out = [None; 6];
            for i in 0..6 {
                if let (Some(x), Some(y)) = (a[i], b[i]) {
                    out[i] = Some((x / y).ln() / (w[0].h / w[1].h).ln());
                }
            }
            out
        })
        .collect()
}

/// Options of [`run_case`].
#[derive(Clone, Copy, Debug)]
pub struct CaseOptions {
    pub l: usize,
    pub k: usize,
    pub hybrid: bool,
    pub postprocess: bool,
    /// With `hybrid`, also solve the mixed method and compare.
    pub compare_hybrid: bool,
}

/// Everything produced by one solve on one mesh.
#[derive(Clone, Debug)]
pub struct CaseResult {
    pub report: ErrorReport,
    pub solution: Solution,
    pub residual: f64,
    pub hybrid_deviation: Option<HybridDeviation>,
}

/// Solves the manufactured case on a mesh and evaluates the errors.
pub fn run_case(mesh: &TriMesh, case: &dyn ManufacturedCase, opts: CaseOptions) -> Result<CaseResult> {
    let disc = Discretization::new(mesh, opts.l, opts.k)?;
    let qd = default_quad_degree(opts.l);
    let f = ExactLoad(case);
    let (solution, deviation) = if opts.hybrid {
        let hyb = solve_hybrid(&disc, &f, qd)?;
        let dev = if opts.compare_hybrid {
            let mixed = solve_mixed(&disc, &f, qd)?;
            Some(hybrid_deviation(&disc, &hyb, &mixed))
        } else {
            None
        };
        (hyb, dev)
    } else {
        (solve_mixed(&disc, &f, qd)?, None)
    };
    let ustar = if opts.postprocess {
        Some(postprocess_ustar(&disc, &solution)?)
    } else {
        None
    };
    let report = error_report(&disc, &solution, case, ustar.as_ref(), qd);
    Ok(CaseResult {
        report,
        residual: solution.info.relative_residual,
        solution,
        hybrid_deviation: deviation,
    })
}

/// `‖σ - Π_h σ‖₀`, the best-approximation reference for the stress error.
pub fn interpolation_error_sigma(
    disc: &Discretization,
    case: &dyn ManufacturedCase,
    quad_degree: usize,
) -> Result<f64> {
    let map = &disc.conforming;
    let coeffs = disc.interpolate_sigma(map, &ExactSigma(case))?;
    let sol = Solution {
        map: map.clone(),
        sigma: coeffs,
        u: vec![0.0; map.n_q],
        lambda: Vec::new(),
        info: Default::default(),
    };
    Ok(error_report(disc, &sol, case, None, quad_degree).sigma_l2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rate_of_exact_power_law() {
        let h = [0.5, 0.25, 0.125];
        let e: Vec<f64> = h.iter().map(|x: &f64| 3.0 * x.powi(4)).collect();
        for r in rates(&h, &e) {
            assert!((r - 4.0).abs() < 1e-12);
        }
    }
}
