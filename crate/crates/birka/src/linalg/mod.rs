//! Dense and sparse kernels shared by the rest of the crate.
//!
//! Dense matrices are `faer::Mat` over `f64` or [`c64`]. Sparse matrices are the
//! crate's own CSR [`SparseMatrix`], factorized through faer's sparse LU.

mod eig;
pub mod io;
mod kron;
mod norms;
mod orth;
mod scalar;
mod sparse;
mod svd_est;
pub mod vecops;

pub use eig::{eig_dense, EigenDecomposition, DEFECTIVE_COND};
pub use faer::Mat;
pub use kron::{kron, unvec, vec};
pub use norms::{frobenius, norms, spectral_norm, Norms};
pub use orth::{orth, Orth};
pub use scalar::Scalar;
pub use sparse::{SparseLu, SparseMatrix};
pub use svd_est::{largest_singular_value, power_norm, smallest_singular_value, Factored, PowerOpts};

/// Complex double, shared with faer.
#[allow(non_camel_case_types)]
pub type c64 = faer::c64;

/// Embed a real matrix in the complex field.
pub fn to_complex(m: &Mat<f64>) -> Mat<c64> {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| c64::new(m[(i, j)], 0.0))
}

/// Real part of a complex matrix.
pub fn real_part(m: &Mat<c64>) -> Mat<f64> {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)].re)
}

/// Transpose without conjugation.
pub fn transpose<T: Scalar>(m: &Mat<T>) -> Mat<T> {
    Mat::from_fn(m.ncols(), m.nrows(), |i, j| m[(j, i)])
}

/// Dense inverse through partial-pivot LU, rejecting numerically singular input.
pub fn inverse<T: Scalar>(m: &Mat<T>, what: &str) -> crate::Result<Mat<T>> {
    use faer::linalg::solvers::DenseSolveCore;
    if m.nrows() != m.ncols() {
        return crate::error::dim_err(format!("{what}: inverse of non-square {}x{}", m.nrows(), m.ncols()));
    }
    let n = m.nrows();
    if n == 0 {
        return Ok(Mat::zeros(0, 0));
    }
    let sv = svd_values(m)?;
    let smax = sv[0];
    let smin = sv[n - 1];
    if !(smin > 1e-14 * smax) || !smin.is_finite() {
        return Err(crate::Error::Singular(format!(
            "{what} (sigma_min/sigma_max = {:.3e})",
            if smax > 0.0 { smin / smax } else { 0.0 }
        )));
    }
    Ok(m.partial_piv_lu().inverse())
}

/// Singular values in nonincreasing order.
pub fn svd_values<T: Scalar>(m: &Mat<T>) -> crate::Result<Vec<f64>> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Ok(Vec::new());
    }
    let z = to_c64_mat(m);
    z.singular_values()
        .map_err(|e| crate::Error::NoConvergence(format!("dense SVD: {e:?}")))
}

pub(crate) fn to_c64_mat<T: Scalar>(m: &Mat<T>) -> Mat<c64> {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)].to_c64())
}

/// Dense condition number in the 2-norm (infinite when singular).
pub fn cond2<T: Scalar>(m: &Mat<T>) -> crate::Result<f64> {
    let sv = svd_values(m)?;
    match (sv.first(), sv.last()) {
        (Some(&hi), Some(&lo)) if lo > 0.0 => Ok(hi / lo),
        (Some(_), Some(_)) => Ok(f64::INFINITY),
        _ => Ok(1.0),
    }
}
