use super::{Mat, Scalar};
use crate::error::{dim_err, Result};

/// Kronecker product: block `(i, j)` of the result is `p[(i, j)] * q`.
pub fn kron<T: Scalar>(p: &Mat<T>, q: &Mat<T>) -> Mat<T> {
    let (s, t) = (q.nrows(), q.ncols());
    Mat::from_fn(p.nrows() * s, p.ncols() * t, |i, j| p[(i / s, j / t)] * q[(i % s, j % t)])
}

/// Column-stacking vectorization.
pub fn vec<T: Scalar>(p: &Mat<T>) -> Vec<T> {
    let mut out = Vec::with_capacity(p.nrows() * p.ncols());
    for j in 0..p.ncols() {
        for i in 0..p.nrows() {
            out.push(p[(i, j)]);
        }
    }
    out
}

/// Inverse of [`vec`].
pub fn unvec<T: Scalar>(x: &[T], rows: usize, cols: usize) -> Result<Mat<T>> {
    if x.len() != rows * cols {
        return dim_err(format!("unvec: length {} is not {rows}x{cols}", x.len()));
    }
    Ok(Mat::from_fn(rows, cols, |i, j| x[j * rows + i]))
}
