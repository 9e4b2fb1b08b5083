//! The global complex `RT ⊂ V_h → Σ_h → Q_h → 0` by dense ranks.

use std::collections::HashMap;

use nalgebra::DMatrix;

use super::{composition_residual, Check, ComplexReport, IDENTITY_TOL};
use crate::assembly::{
    assemble_mixed, build_hermite_map, default_quad_degree, hermite_dimension_formula,
    sigma_dimension_formula, Discretization,
};
use crate::element::HermiteElement;
use crate::error::{Error, Result};
use crate::fields::FnScalar;
use crate::mesh::TriMesh;
use crate::polyalg::sym_inner;

/// Largest mesh handled by the dense rank computation.
pub const MAX_DENSE_CELLS: usize = 64;

/// `sym curl` as a matrix from global `V_h` coefficients to global `Σ_h`
/// coefficients, with the largest disagreement between cells on shared
/// DOFs and the largest relative reproduction error.
fn sym_curl_matrix(disc: &Discretization) -> Result<(DMatrix<f64>, f64, f64)> {
    let mesh = disc.mesh;
    let hmap = build_hermite_map(mesh, disc.l);
    let smap = &disc.conforming;
    let mut count = vec![0usize; smap.n_sigma];
    for cm in &smap.sigma {
        for &(g, _) in cm {
            count[g] += 1;
        }
    }
    let mut values: HashMap<(usize, usize), Vec<f64>> = HashMap::new();
    let mut reproduction: f64 = 0.0;
    for c in 0..mesh.num_cells() {
        let el = &disc.elements[c];
        let herm = HermiteElement::new(*el.triangle(), disc.l)?;
        let tri = el.triangle();
        for (i, phi) in herm.shapes().iter().enumerate() {
            let (gv, fv) = hmap.cells[c][i];
            let sc = phi.sym_curl();
            let dofs = el.eval_dofs_poly(&sc);
            let miss = &el.combine(&dofs) - &sc;
            let norm = sym_inner(&sc, &sc, tri).sqrt();
            if norm > 0.0 {
                reproduction = reproduction.max(sym_inner(&miss, &miss, tri).sqrt() / norm);
            }
            for (m, d) in dofs.iter().enumerate() {
                let (gs, fs) = smap.sigma[c][m];
                values.entry((gs, gv)).or_default().push(fv * fs * d);
            }
        }
    }
    let mut s = DMatrix::zeros(smap.n_sigma, hmap.n_v);
    let mut spread: f64 = 0.0;
    for ((gs, gv), vals) in values {
        let n = count[gs];
        let mean = vals.iter().sum::<f64>() / n as f64;
        let mut dev = vals.iter().fold(0.0_f64, |a, v| a.max((v - mean).abs()));
        if vals.len() < n {
            dev = dev.max(mean.abs());
        }
        spread = spread.max(dev);
        s[(gs, gv)] = mean;
    }
    let scale = s.iter().fold(0.0_f64, |a, b| a.max(b.abs())).max(f64::MIN_POSITIVE);
    Ok((s, spread / scale, reproduction))
}

pub fn check_global_fem_complex(mesh: &TriMesh, l: usize, k: usize) -> Result<ComplexReport> {
    if mesh.num_cells() > MAX_DENSE_CELLS {
        return Err(Error::InvalidParameter(format!(
            "dense complex check supports at most {MAX_DENSE_CELLS} triangles, mesh has {}",
            mesh.num_cells()
        )));
    }
    let disc = Discretization::new(mesh, l, k)?;
    let mut r = ComplexReport::new(format!(
        "global complex, l = {l}, k = {k}, {} triangles",
        mesh.num_cells()
    ));
    let n_sigma = disc.conforming.n_sigma;
    let n_q = disc.conforming.n_q;
    r.check(Check::equal(
        "dim Σ_h matches the counting formula",
        sigma_dimension_formula(mesh, l, k),
        n_sigma,
    ));
    let (s, spread, reproduction) = sym_curl_matrix(&disc)?;
    r.check(Check::equal(
        "dim V_h matches the counting formula",
        hermite_dimension_formula(mesh, l),
        s.ncols(),
    ));
    r.check(Check::residual("sym curl V_h single-valued in Σ_h", spread, IDENTITY_TOL));
    r.check(Check::residual("sym curl V_h ⊆ Σ_h cellwise", reproduction, IDENTITY_TOL));
    let sys = assemble_mixed(&disc, &FnScalar(|_| 0.0), default_quad_degree(l))?;
    let b = sys.divdiv.to_dense();
    let a1 = r.arrow("sym curl: V_h → Σ_h", &s);
    let a2 = r.arrow("div div: Σ_h → Q_h", &b);
    r.check(Check::equal("kernel of sym curl on V_h is RT", 3, a1.kernel_dim));
    r.check(Check::equal("div div onto Q_h", n_q, a2.rank));
    r.check(Check::equal("ker div div = im sym curl", a1.rank, a2.kernel_dim));
    let bs = &b * &s;
    let bscale = b.iter().fold(0.0_f64, |a, x| a.max(x.abs()));
    r.check(Check::residual(
        "div div ∘ sym curl = 0",
        composition_residual(&bs, &s, bscale),
        IDENTITY_TOL,
    ));
    let alt = 3 + n_sigma as i64 - s.ncols() as i64 - n_q as i64;
    r.check(Check::equal("alternating dimension sum", 0, alt.unsigned_abs() as usize));
    Ok(r)
}
