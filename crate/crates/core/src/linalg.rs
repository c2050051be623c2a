//! Small dense helpers and sparse direct solves.

use crate::error::{Error, Result};
use faer::prelude::Solve;
use faer::sparse::{SparseColMat, Triplet};
use faer::{Col, Side};
use nalgebra::DMatrix;

/// Determinant of a row-major n×n matrix.
pub fn det(a: &[f64], n: usize) -> f64 {
    match n {
        1 => a[0],
        2 => a[0] * a[3] - a[1] * a[2],
        3 => {
            a[0] * (a[4] * a[8] - a[5] * a[7]) - a[1] * (a[3] * a[8] - a[5] * a[6]) + a[2] * (a[3] * a[7] - a[4] * a[6])
        }
        _ => DMatrix::from_row_slice(n, n, a).determinant(),
    }
}

/// Eigenvalues of a symmetric row-major matrix, ascending.
pub fn sym_eigenvalues(a: &[f64], n: usize) -> Vec<f64> {
    let m = DMatrix::from_row_slice(n, n, a);
    let m = (&m + m.transpose()) * 0.5;
    let mut ev: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Sparse square system assembled from (row, col, value) entries; duplicates add up.
#[derive(Debug, Default, Clone)]
pub struct Triplets {
    pub n: usize,
    entries: Vec<Triplet<usize, usize, f64>>,
}

impl Triplets {
    pub fn new(n: usize) -> Self {
        Triplets { n, entries: Vec::new() }
    }

    pub fn with_capacity(n: usize, cap: usize) -> Self {
        Triplets { n, entries: Vec::with_capacity(cap) }
    }

    pub fn push(&mut self, r: usize, c: usize, v: f64) {
        self.entries.push(Triplet::new(r, c, v));
    }

    fn matrix(&self) -> Result<SparseColMat<usize, f64>> {
        SparseColMat::try_new_from_triplets(self.n, self.n, &self.entries)
            .map_err(|e| Error::Parameter(format!("sparse assembly: {e:?}")))
    }

    /// Solve with a Cholesky factorization; only the lower triangle is read.
    pub fn solve_spd(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        let m = self.matrix()?;
        let llt = m.sp_cholesky(Side::Lower).map_err(|e| Error::Degenerate(format!("cholesky failed: {e:?}")))?;
        let b = Col::<f64>::from_fn(self.n, |i| rhs[i]);
        let x = llt.solve(&b);
        Ok((0..self.n).map(|i| x[i]).collect())
    }

    /// Solve with a pivoted LU factorization.
    pub fn solve_lu(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        let m = self.matrix()?;
        let lu = m.sp_lu().map_err(|e| Error::Degenerate(format!("lu failed: {e:?}")))?;
        let b = Col::<f64>::from_fn(self.n, |i| rhs[i]);
        let x = lu.solve(&b);
        let out: Vec<f64> = (0..self.n).map(|i| x[i]).collect();
        if out.iter().any(|v| !v.is_finite()) {
            return Err(Error::Degenerate("singular sparse system".into()));
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn det_small() {
        assert_eq!(det(&[2.0, 1.0, 1.0, 3.0], 2), 5.0);
        let a = [2.0, 0.0, 0.0, 0.0, 0.0, 3.0, 0.0, 0.0, 0.0, 0.0, 4.0, 0.0, 0.0, 0.0, 0.0, 5.0];
        assert!((det(&a, 4) - 120.0).abs() < 1e-12);
    }

    #[test]
    fn sparse_solves_agree() {
        let mut t = Triplets::new(3);
        for i in 0..3 {
            t.push(i, i, 4.0);
        }
        t.push(1, 0, -1.0);
        t.push(2, 1, -1.0);
        let mut full = t.clone();
        full.push(0, 1, -1.0);
        full.push(1, 2, -1.0);
        let b = [1.0, 2.0, 3.0];
        let x = t.solve_spd(&b).unwrap();
        let y = full.solve_lu(&b).unwrap();
        for i in 0..3 {
            assert!((x[i] - y[i]).abs() < 1e-12);
        }
        assert!((4.0 * x[0] - x[1] - 1.0).abs() < 1e-12);
    }
}
