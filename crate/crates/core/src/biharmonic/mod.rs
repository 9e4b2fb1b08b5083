//! The clamped plate problem in mixed form: solvers, error norms,
//! postprocessing and inf-sup diagnostics.

mod exact;
mod norms;
mod postprocess;
mod report;
mod solve;
mod stability;

pub use exact::{ExactLoad, ExactSigma, ExactU, ManufacturedCase, SinSquared};
pub use norms::{l2_norm, norm_2h, norm_2h_parts, Difference, Norm2hParts, Piecewise, PiecewisePoly};
pub use postprocess::{postprocess_cell, postprocess_ustar, ustar_degree};
pub use report::{
    error_report, interpolation_error_sigma, rates, report_rates, run_case, CaseOptions,
    CaseResult, ErrorReport,
};
pub use solve::{
    hybrid_deviation, solve_hybrid, solve_hybrid_system, solve_mixed, solve_mixed_system,
    HybridDeviation, Solution, SOLVE_RESIDUAL_TOL,
};
pub use stability::{gram_2h, inf_sup_constants, inf_sup_witness, InfSupConstants};
