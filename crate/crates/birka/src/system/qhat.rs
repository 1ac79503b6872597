use super::{BilinearSystem, GramianOperator};
use crate::error::{dim_err, Result};
use crate::linalg::{kron, largest_singular_value, smallest_singular_value, svd_values, Mat, PowerOpts, SparseLu};
use crate::Error;
use serde::Serialize;

/// Norm diagnostics of the error-system operator `Q` (four decoupled copies of `G`).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct QHatDiagnostics {
    /// `||Q^{-1}||_2 = 1 / sigma_min(G)`.
    pub qinv_norm: f64,
    pub base_sigma_min: f64,
    pub base_sigma_max: f64,
    /// `1 / ||Q||_2 = 1 / sigma_max(G)`. Not an inverse norm; reported for comparison only.
    pub qhat_norm_reciprocal: f64,
    /// `sigma_min(-A^T - A - sum_k N_k N_k^T)`.
    pub lyapunov_symbol_sigma_min: f64,
}

/// Extreme singular values of the decoupled base operator.
///
/// `Q` is permutation-similar to `diag(G, G, G, G)`, so its singular values are
/// those of `G` with multiplicity four and `||Q^{-1}|| = 1 / sigma_min(G)`.
pub fn qhat_diagnostics(sys: &BilinearSystem) -> Result<QHatDiagnostics> {
    let g = GramianOperator::new(sys).assemble();
    let lu = SparseLu::new(&g).map_err(|e| match e {
        Error::Singular(s) => Error::Singular(format!("base Gramian operator of Q is singular: {s}")),
        other => other,
    })?;
    let opts = PowerOpts { tol: 1e-12, max_iter: 20_000, seed: 0x9a };
    let smin = smallest_singular_value(&lu, opts)?;
    let smax = largest_singular_value(&g, opts)?;
    Ok(QHatDiagnostics {
        qinv_norm: 1.0 / smin,
        base_sigma_min: smin,
        base_sigma_max: smax,
        qhat_norm_reciprocal: 1.0 / smax,
        lyapunov_symbol_sigma_min: lyapunov_symbol_sigma_min(sys)?,
    })
}

fn lyapunov_symbol_sigma_min(sys: &BilinearSystem) -> Result<f64> {
    let a = sys.a().to_dense();
    let mut s = -(&a + a.transpose());
    for nk in sys.ns() {
        let d = nk.to_dense();
        s -= &d * d.transpose();
    }
    Ok(svd_values(&s)?.last().copied().unwrap_or(0.0))
}

/// Dense `4n^2 x 4n^2` assembly of `Q` for the error system of `sys` against itself.
///
/// Only meant for small `n` (cross-checks of the decoupling).
pub fn assemble_qhat(sys: &BilinearSystem) -> Result<Mat<f64>> {
    let n = sys.n();
    if n > 12 {
        return dim_err(format!("dense Q assembly limited to n <= 12, got {n}"));
    }
    let blk = |m: &Mat<f64>| {
        let mut out = Mat::zeros(2 * n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = m[(i, j)];
                out[(i + n, j + n)] = m[(i, j)];
            }
        }
        out
    };
    let ahat = blk(&sys.a().to_dense());
    let eye = Mat::<f64>::identity(2 * n, 2 * n);
    let mut q = -(kron(&ahat, &eye) + kron(&eye, &ahat));
    for nk in sys.ns() {
        let nh = blk(&nk.to_dense());
        q -= kron(&nh, &nh);
    }
    Ok(q)
}
