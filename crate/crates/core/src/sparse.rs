//! Coordinate-format sparse matrices and the sparse direct solve.

use std::io::Write;

use faer::prelude::*;
use faer::sparse::{SparseColMat, Triplet};
use faer::Mat;
use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Sparse matrix in coordinate format. Duplicates are allowed until
/// [`CooMatrix::compress`] sums them.
#[derive(Clone, Debug, Default)]
pub struct CooMatrix {
    pub nrows: usize,
    pub ncols: usize,
    pub entries: Vec<(usize, usize, f64)>,
}

impl CooMatrix {
    pub fn new(nrows: usize, ncols: usize) -> Self {
        Self {
            nrows,
            ncols,
            entries: Vec::new(),
        }
    }

    pub fn push(&mut self, row: usize, col: usize, val: f64) {
        debug_assert!(row < self.nrows && col < self.ncols);
        if val != 0.0 {
            self.entries.push((row, col, val));
        }
    }

    /// Sorts by (row, col) and sums duplicates; the result is deterministic
    /// for a given entry sequence.
    pub fn compress(&mut self) {
        self.entries
            .sort_by_key(|a| (a.0, a.1));
        let mut out: Vec<(usize, usize, f64)> = Vec::with_capacity(self.entries.len());
        for &(r, c, v) in &self.entries {
            match out.last_mut() {
                Some(last) if last.0 == r && last.1 == c => last.2 += v,
                _ => out.push((r, c, v)),
            }
        }
        out.retain(|e| e.2 != 0.0);
        self.entries = out;
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn transpose(&self) -> Self {
        Self {
            nrows: self.ncols,
            ncols: self.nrows,
            entries: self.entries.iter().map(|&(r, c, v)| (c, r, v)).collect(),
        }
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.ncols);
        let mut y = vec![0.0; self.nrows];
        for &(r, c, v) in &self.entries {
            y[r] += v * x[c];
        }
        y
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.nrows, self.ncols);
        for &(r, c, v) in &self.entries {
            m[(r, c)] += v;
        }
        m
    }

    /// Places `other` with its top-left corner at `(row, col)`.
    pub fn add_block(&mut self, other: &CooMatrix, row: usize, col: usize) {
        assert!(row + other.nrows <= self.nrows && col + other.ncols <= self.ncols);
        self.entries
            .extend(other.entries.iter().map(|&(r, c, v)| (r + row, c + col, v)));
    }

    /// Writes `nrows ncols nnz` and then one `row col value` line per entry.
    pub fn write_coordinate(&self, mut w: impl Write) -> std::io::Result<()> {
        let mut m = self.clone();
        m.compress();
        writeln!(w, "{} {} {}", m.nrows, m.ncols, m.nnz())?;
        for (r, c, v) in &m.entries {
            writeln!(w, "{r} {c} {v:.17e}")?;
        }
        Ok(())
    }

    fn to_faer(&self) -> Result<SparseColMat<usize, f64>> {
        let trip: Vec<Triplet<usize, usize, f64>> = self
            .entries
            .iter()
            .map(|&(r, c, v)| Triplet::new(r, c, v))
            .collect();
        SparseColMat::try_new_from_triplets(self.nrows, self.ncols, &trip)
            .map_err(|e| Error::Solver(format!("{e:?}")))
    }
}

/// Result of a sparse direct solve.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SolveInfo {
    /// `‖b - A x‖₂ / ‖b‖₂` (absolute when `b = 0`).
    pub relative_residual: f64,
    pub refinement_steps: usize,
}

/// Solves `A x = b` by sparse LU with up to three steps of iterative
/// refinement.
pub fn solve_sparse(a: &CooMatrix, b: &[f64]) -> Result<(Vec<f64>, SolveInfo)> {
    assert_eq!(a.nrows, a.ncols);
    assert_eq!(b.len(), a.nrows);
    let n = a.nrows;
    let bnorm = norm(b);
    if bnorm == 0.0 {
        return Ok((
            vec![0.0; n],
            SolveInfo {
                relative_residual: 0.0,
                refinement_steps: 0,
            },
        ));
    }
    let mat = a.to_faer()?;
    let lu = mat
        .sp_lu()
        .map_err(|e| Error::Solver(format!("sparse LU failed: {e:?}")))?;
    let solve = |rhs: &[f64]| -> Vec<f64> {
        let r = Mat::from_fn(n, 1, |i, _| rhs[i]);
        let x = lu.solve(&r);
        (0..n).map(|i| x[(i, 0)]).collect()
    };
    let mut x = solve(b);
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::Solver("sparse LU produced non-finite values".into()));
    }
    let mut res = residual(a, &x, b);
    let mut steps = 0;
    while steps < 3 && norm(&res) > 1e-14 * bnorm {
        let dx = solve(&res);
        for (xi, d) in x.iter_mut().zip(&dx) {
            *xi += d;
        }
        let new_res = residual(a, &x, b);
        steps += 1;
        if norm(&new_res) >= norm(&res) {
            res = new_res;
            break;
        }
        res = new_res;
    }
    Ok((
        x,
        SolveInfo {
            relative_residual: norm(&res) / bnorm,
            refinement_steps: steps,
        },
    ))
}

fn residual(a: &CooMatrix, x: &[f64], b: &[f64]) -> Vec<f64> {
    let ax = a.mul_vec(x);
    b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect()
}

pub(crate) fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compress_sums_duplicates() {
        let mut m = CooMatrix::new(2, 2);
        m.push(1, 0, 1.0);
        m.push(0, 0, 2.0);
        m.push(1, 0, 3.0);
        m.compress();
        assert_eq!(m.entries, vec![(0, 0, 2.0), (1, 0, 4.0)]);
    }

    #[test]
    fn solves_indefinite_saddle() {
        // [[2, 0, 1], [0, 3, 1], [1, 1, 0]]
        let mut m = CooMatrix::new(3, 3);
        for &(r, c, v) in &[(0, 0, 2.0), (1, 1, 3.0), (0, 2, 1.0), (2, 0, 1.0), (1, 2, 1.0), (2, 1, 1.0)] {
            m.push(r, c, v);
        }
        let b = [1.0, 2.0, 3.0];
        let (x, info) = solve_sparse(&m, &b).unwrap();
        let dense = m.to_dense();
        let xd = dense.lu().solve(&nalgebra::DVector::from_column_slice(&b)).unwrap();
        for i in 0..3 {
            assert!((x[i] - xd[i]).abs() < 1e-12);
        }
        assert!(info.relative_residual < 1e-14);
    }

    #[test]
    fn coordinate_dump() {
        let mut m = CooMatrix::new(2, 3);
        m.push(0, 2, 1.5);
        let mut buf = Vec::new();
        m.write_coordinate(&mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert!(s.starts_with("2 3 1\n0 2 1.5"));
    }
}
