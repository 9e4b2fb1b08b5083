//! Residuals of `div div Π_h τ = Q_h div div τ` and
//! `sym curl I_h v = Π_h sym curl v` for random polynomial trial fields.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{Check, ComplexReport, IDENTITY_TOL};
use crate::assembly::Discretization;
use crate::element::{interpolate_commuting_poly, HermiteElement};
use crate::error::Result;
use crate::mesh::TriMesh;
use crate::polyalg::{dim_p, scalar_inner, sym_inner, Frame, Poly2D, SymTensorPoly2D, VectorPoly2D};

/// Largest elementwise and global relative residuals of both identities.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct CommutingResiduals {
    pub divdiv_max_cell: f64,
    pub divdiv_global: f64,
    pub symcurl_max_cell: f64,
    pub symcurl_global: f64,
}

fn random_poly(rng: &mut ChaCha8Rng, fr: Frame, m: usize) -> Poly2D {
    Poly2D::from_coeffs(fr, m, (0..dim_p(m)).map(|_| rng.gen_range(-1.0..1.0)).collect())
}

/// `num / den`, or `num` when the denominator vanishes.
fn ratio(num: f64, den: f64) -> f64 {
    if den > 0.0 {
        num / den
    } else {
        num
    }
}

/// Checks both commuting identities on every cell for random
/// `τ ∈ P_{k+2}(S)` and `v ∈ P_{k+3}(R²)` drawn from `seed`, plus the
/// trivial cases `τ ∈ P_{min(ℓ,k)}(S)` and `v ∈ RT`.
pub fn check_commuting_diagram(
    mesh: &TriMesh,
    l: usize,
    k: usize,
    seed: u64,
) -> Result<(ComplexReport, CommutingResiduals)> {
    let disc = Discretization::new(mesh, l, k)?;
    let fr = Frame::new(crate::geometry::Point::new(0.5, 0.5), 0.5);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tau = SymTensorPoly2D::new(
        random_poly(&mut rng, fr, k + 2),
        random_poly(&mut rng, fr, k + 2),
        random_poly(&mut rng, fr, k + 2),
    );
    let v = VectorPoly2D::new(random_poly(&mut rng, fr, k + 3), random_poly(&mut rng, fr, k + 3));
    let m = l.min(k);
    let low = SymTensorPoly2D::new(
        random_poly(&mut rng, fr, m),
        random_poly(&mut rng, fr, m),
        random_poly(&mut rng, fr, m),
    );
    let rt = VectorPoly2D::new(
        &Poly2D::constant(fr, 0.3) + &Poly2D::coordinate(fr, 0).scaled(-0.7),
        &Poly2D::constant(fr, -1.1) + &Poly2D::coordinate(fr, 1).scaled(-0.7),
    );

    let per_cell: Vec<Result<[f64; 6]>> = (0..mesh.num_cells())
        .into_par_iter()
        .map(|c| {
            let el = &disc.elements[c];
            let tri = el.triangle();
            let cf = el.frame();
            let herm = HermiteElement::new(*tri, l)?;
            let qb = &disc.qbasis[c];
            let project = |p: &Poly2D| -> Poly2D {
                let mut out = Poly2D::zero(cf, k - 2);
                for q in qb {
                    out.axpy(scalar_inner(p, q, tri), q);
                }
                out
            };
            let t = tau.reframe(cf);
            let lhs = el.interpolate_poly(&t).divdiv();
            let rhs = project(&t.divdiv());
            let d = &lhs - &rhs;
            let dd = [scalar_inner(&d, &d, tri), scalar_inner(&rhs, &rhs, tri)];

            let vv = v.reframe(cf);
            let iv = interpolate_commuting_poly(&herm, el, &vv)?;
            let lhs = iv.sym_curl();
            let rhs = el.interpolate_poly(&vv.sym_curl());
            let d = &lhs - &rhs;
            let sc = [sym_inner(&d, &d, tri), sym_inner(&rhs, &rhs, tri)];

            let lo = low.reframe(cf);
            let d = &el.interpolate_poly(&lo) - &lo;
            let low_res = (sym_inner(&d, &d, tri) / sym_inner(&lo, &lo, tri)).sqrt();

            let rv = rt.reframe(cf);
            let irt = interpolate_commuting_poly(&herm, el, &rv)?;
            let d = &irt - &rv;
            let rt_res = d.comps.iter().map(|p| p.max_abs_coeff()).fold(0.0, f64::max)
                + el.interpolate_poly(&rv.sym_curl()).max_abs_coeff();
            Ok([dd[0], dd[1], sc[0], sc[1], low_res, rt_res])
        })
        .collect();
    let mut res = CommutingResiduals::default();
    let (mut dd_num, mut dd_den, mut sc_num, mut sc_den) = (0.0, 0.0, 0.0, 0.0);
    let (mut low_max, mut rt_max): (f64, f64) = (0.0, 0.0);
    for row in per_cell {
        let row = row?;
        res.divdiv_max_cell = res.divdiv_max_cell.max(ratio(row[0].sqrt(), row[1].sqrt()));
        res.symcurl_max_cell = res.symcurl_max_cell.max(ratio(row[2].sqrt(), row[3].sqrt()));
        dd_num += row[0];
        dd_den += row[1];
        sc_num += row[2];
        sc_den += row[3];
        low_max = low_max.max(row[4]);
        rt_max = rt_max.max(row[5]);
    }
    res.divdiv_global = ratio(dd_num.sqrt(), dd_den.sqrt());
    res.symcurl_global = ratio(sc_num.sqrt(), sc_den.sqrt());

    let mut r = ComplexReport::new(format!(
        "commuting diagram, l = {l}, k = {k}, {} triangles, seed {seed}",
        mesh.num_cells()
    ));
    r.check(Check::residual(
        "div div Π_h τ = Q_h div div τ (worst cell)",
        res.divdiv_max_cell,
        IDENTITY_TOL,
    ));
    r.check(Check::residual(
        "sym curl I_h v = Π_h sym curl v (worst cell)",
        res.symcurl_max_cell,
        IDENTITY_TOL,
    ));
    r.check(Check::residual("Π_h τ = τ for τ ∈ P_min(l,k)(S)", low_max, IDENTITY_TOL));
    r.check(Check::residual("I_h v = v and Π_h sym curl v = 0 for v ∈ RT", rt_max, IDENTITY_TOL));
    Ok((r, res))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::structured_unit_square;

    #[test]
    fn commuting_on_small_mesh() {
        let mesh = structured_unit_square(2).unwrap();
        for (l, k) in [(3, 3), (2, 3), (4, 4), (4, 5)] {
            let (r, res) = check_commuting_diagram(&mesh, l, k, 11).unwrap();
            assert!(r.passed(), "{r}");
            assert!(res.divdiv_global <= res.divdiv_max_cell + 1e-15);
        }
    }
}
