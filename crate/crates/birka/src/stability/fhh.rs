use super::PerturbationF;
use crate::linalg::{kron, spectral_norm, Mat};
use crate::{Error, Result};

/// `||I (x) F_hat + F_hat (x) I||_2` with `F_hat = diag(0, F)` of order `2n`.
///
/// With `X` split into 2x2 blocks the map `X -> F_hat X + X F_hat^T` acts as
/// `X12 F^T`, `F X21` and `F X22 + X22 F^T` on separate blocks, so the norm is
/// `max(||F||, ||F (+) F||)` (Kronecker sum). The same splitting applied to
/// `F = Z F_z Z^T` with orthonormal `Z` of width at most `4r` reduces `F (+) F`
/// to the small dense `F_z (+) F_z`.
pub fn fhh_norm(f: &PerturbationF) -> Result<f64> {
    if f.norm_2 == 0.0 {
        return Ok(0.0);
    }
    let fz = f.compressed();
    let k = fz.nrows();
    let eye = Mat::<f64>::identity(k, k);
    let sum = kron(&eye, &fz) + kron(&fz, &eye);
    // largest eigenvalue of the Gram matrix; several times cheaper than a full SVD here
    let gram = sum.transpose() * &sum;
    let top = gram
        .self_adjoint_eigenvalues(faer::Side::Lower)
        .map_err(|e| Error::NoConvergence(format!("Kronecker-sum eigenvalues: {e:?}")))?
        .into_iter()
        .fold(0.0, f64::max);
    Ok(f.norm_2.max(spectral_norm(&fz)).max(top.sqrt()))
}

/// Dense `I (x) F_hat + F_hat (x) I`, for small checks.
pub fn assemble_fhh(f: &Mat<f64>) -> Mat<f64> {
    let n = f.nrows();
    let fhat = Mat::from_fn(2 * n, 2 * n, |i, j| if i >= n && j >= n { f[(i - n, j - n)] } else { 0.0 });
    let eye = Mat::<f64>::identity(2 * n, 2 * n);
    kron(&eye, &fhat) + kron(&fhat, &eye)
}
