//! Small dense helpers on top of nalgebra.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Largest condition number accepted for a local DOF matrix after
/// equilibration.
pub const MAX_DOF_CONDITION: f64 = 1e12;

/// 2-norm condition number from singular values (`inf` if singular).
pub fn condition_number(m: &DMatrix<f64>) -> f64 {
    let sv = m.clone().svd(false, false).singular_values;
    let max = sv.iter().cloned().fold(0.0, f64::max);
    let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    if min <= 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Inverts a square matrix after row and column equilibration and returns
/// the inverse together with the condition number of the equilibrated
/// matrix. Fails when that condition number exceeds `max_cond`.
pub fn equilibrated_inverse(
    m: &DMatrix<f64>,
    what: &str,
    max_cond: f64,
) -> Result<(DMatrix<f64>, f64)> {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "matrix must be square");
    let row: Vec<f64> = (0..n)
        .map(|i| {
            let r = m.row(i).amax();
            if r > 0.0 {
                1.0 / r
            } else {
                1.0
            }
        })
        .collect();
    let mut a = m.clone();
    for (i, r) in row.iter().enumerate() {
        a.row_mut(i).scale_mut(*r);
    }
    let col: Vec<f64> = (0..n)
        .map(|j| {
            let c = a.column(j).amax();
            if c > 0.0 {
                1.0 / c
            } else {
                1.0
            }
        })
        .collect();
    for (j, c) in col.iter().enumerate() {
        a.column_mut(j).scale_mut(*c);
    }
    let cond = condition_number(&a);
    if cond.is_nan() || cond > max_cond {
        return Err(Error::SingularDofMatrix {
            what: what.to_string(),
            cond,
        });
    }
    let inv = a.try_inverse().ok_or_else(|| Error::SingularDofMatrix {
        what: what.to_string(),
        cond,
    })?;
    // m = R⁻¹ a C⁻¹  ⇒  m⁻¹ = C a⁻¹ R
    let mut out = inv;
    for (i, c) in col.iter().enumerate() {
        out.row_mut(i).scale_mut(*c);
    }
    for (j, r) in row.iter().enumerate() {
        out.column_mut(j).scale_mut(*r);
    }
    Ok((out, cond))
}
