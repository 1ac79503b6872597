use super::KroneckerOperator;
use crate::linalg::{c64, Mat, Scalar, SparseMatrix};
use crate::{Error, Result};
use std::collections::BTreeSet;

const PIVOT_ATTEMPTS: usize = 3;

/// Threshold incomplete LU, `M ~ L U` with `L` unit lower triangular.
#[derive(Debug, Clone)]
pub struct IlutPreconditioner {
    pub drop_tol: f64,
    /// Diagonal shift that was needed to avoid a zero pivot (0 if none).
    pub shift: f64,
    n: usize,
    /// Strict lower part, one row per entry of `lower`.
    lower: Vec<Vec<(usize, c64)>>,
    /// Diagonal of `U`.
    diag: Vec<c64>,
    /// Strict upper part by row.
    upper: Vec<Vec<(usize, c64)>>,
}

/// ILUT of the operator in its current orientation.
pub fn build_ilut(op: &KroneckerOperator<'_>, drop_tol: f64) -> Result<IlutPreconditioner> {
    IlutPreconditioner::from_matrix(&op.assemble(), drop_tol)
}

impl IlutPreconditioner {
    pub fn from_matrix(m: &SparseMatrix<c64>, drop_tol: f64) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::Dimension("ILUT needs a square matrix".into()));
        }
        if !(drop_tol >= 0.0 && drop_tol.is_finite()) {
            return Err(Error::Invalid(format!("drop tolerance must be finite and >= 0, got {drop_tol}")));
        }
        let base = m.frobenius();
        let mut shift = 0.0;
        for attempt in 0..=PIVOT_ATTEMPTS {
            if let Some(f) = factor(m, drop_tol, shift) {
                return Ok(f);
            }
            shift = 1e-8 * base * 10f64.powi(attempt as i32);
        }
        Err(Error::Singular(format!("ILUT hit a zero pivot even with diagonal shift {shift:.3e}")))
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.n + self.lower.iter().chain(&self.upper).map(Vec::len).sum::<usize>()
    }

    /// `(L U)^{-1} b`
    pub fn apply(&self, b: &[c64]) -> Vec<c64> {
        let mut y = b.to_vec();
        for i in 0..self.n {
            let mut s = y[i];
            for &(j, l) in &self.lower[i] {
                s -= l * y[j];
            }
            y[i] = s;
        }
        for i in (0..self.n).rev() {
            let mut s = y[i];
            for &(j, u) in &self.upper[i] {
                s -= u * y[j];
            }
            y[i] = s / self.diag[i];
        }
        y
    }

    /// `(L U)^{-T} b`, plain transpose.
    pub fn apply_transpose(&self, b: &[c64]) -> Vec<c64> {
        let mut z = b.to_vec();
        for i in 0..self.n {
            z[i] /= self.diag[i];
            let zi = z[i];
            for &(j, u) in &self.upper[i] {
                z[j] -= u * zi;
            }
        }
        for i in (0..self.n).rev() {
            let xi = z[i];
            for &(j, l) in &self.lower[i] {
                z[j] -= l * xi;
            }
        }
        z
    }

    /// Dense `L U`, for checking small factorizations.
    pub fn lu_product(&self) -> Mat<c64> {
        let n = self.n;
        let mut l = Mat::<c64>::identity(n, n);
        let mut u = Mat::<c64>::zeros(n, n);
        for i in 0..n {
            for &(j, v) in &self.lower[i] {
                l[(i, j)] = v;
            }
            u[(i, i)] = self.diag[i];
            for &(j, v) in &self.upper[i] {
                u[(i, j)] = v;
            }
        }
        &l * &u
    }
}

fn factor(m: &SparseMatrix<c64>, drop_tol: f64, shift: f64) -> Option<IlutPreconditioner> {
    let n = m.nrows();
    let mut lower: Vec<Vec<(usize, c64)>> = Vec::with_capacity(n);
    let mut upper: Vec<Vec<(usize, c64)>> = Vec::with_capacity(n);
    let mut diag: Vec<c64> = Vec::with_capacity(n);
    let mut w = vec![c64::zero(); n];
    let mut live = vec![false; n];
    let mut cols: Vec<usize> = Vec::new();
    let mut pending: BTreeSet<usize> = BTreeSet::new();

    for i in 0..n {
        let mut row_norm_sq = 0.0;
        let touch = |j: usize, live: &mut [bool], cols: &mut Vec<usize>, pending: &mut BTreeSet<usize>| {
            if !live[j] {
                live[j] = true;
                cols.push(j);
                if j < i {
                    pending.insert(j);
                }
            }
        };
        for (j, v) in m.row(i) {
            touch(j, &mut live, &mut cols, &mut pending);
            w[j] += v;
            row_norm_sq += v.abs_sq();
        }
        if shift != 0.0 {
            touch(i, &mut live, &mut cols, &mut pending);
            w[i] += c64::new(shift, 0.0);
        }
        let tau = drop_tol * row_norm_sq.sqrt();

        while let Some(k) = pending.pop_first() {
            let wk = w[k] / diag[k];
            if wk.norm() < tau {
                w[k] = c64::zero();
                continue;
            }
            w[k] = wk;
            for &(j, u) in &upper[k] {
                touch(j, &mut live, &mut cols, &mut pending);
                w[j] -= wk * u;
            }
        }

        let mut lo = Vec::new();
        let mut up = Vec::new();
        let mut d = c64::zero();
        for &j in &cols {
            let v = w[j];
            if j == i {
                d = v;
            } else if v != c64::zero() && v.norm() >= tau {
                if j < i {
                    lo.push((j, v));
                } else {
                    up.push((j, v));
                }
            }
            w[j] = c64::zero();
            live[j] = false;
        }
        cols.clear();
        if !(d.norm() > 1e-14 * row_norm_sq.sqrt()) || !d.finite() {
            return None;
        }
        lo.sort_unstable_by_key(|e| e.0);
        up.sort_unstable_by_key(|e| e.0);
        lower.push(lo);
        upper.push(up);
        diag.push(d);
    }
    Some(IlutPreconditioner { drop_tol, shift, n, lower, diag, upper })
}
