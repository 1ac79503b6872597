use crate::linalg::{largest_singular_value, spectral_norm, svd_values, Mat, PowerOpts, SparseLu};
use crate::system::{h2_norm_kron, qhat_diagnostics, GramianOperator, QHatDiagnostics};
use crate::{BilinearSystem, Error, Result};
use serde::Serialize;

/// The condition number `k` of the H2 norm with respect to perturbations of `A`, with every factor.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ConditionNumber {
    pub value: f64,
    /// `||vec(I_2p)|| = sqrt(2p)`
    pub vec_i2p: f64,
    /// `||C_hat Q^{-1}||_2 = 2 ||(C (x) C) G^{-1}||_2`
    pub chat_qinv_norm: f64,
    /// `||Q^{-1}||_2`
    pub qinv_norm: f64,
    /// `||B_hat||_2 = 2 ||B||_2^2`
    pub bhat_norm: f64,
    /// `||vec(I_2m)|| = sqrt(2m)`
    pub vec_i2m: f64,
    pub a_norm: f64,
    pub h2_norm: f64,
    pub qhat: QHatDiagnostics,
}

/// Evaluates `k = ||vec(I_2p)|| ||C_hat Q^{-1}|| ||Q^{-1}|| ||B_hat|| ||vec(I_2m)|| ||A|| / (||sys||_H2 (1 - ||Q^{-1}||))`.
///
/// Requires `||Q^{-1}|| < 1`, the hypothesis of the Neumann-series argument.
pub fn condition_number(sys: &BilinearSystem) -> Result<ConditionNumber> {
    let qhat = qhat_diagnostics(sys)?;
    condition_number_with(sys, qhat)
}

/// As [`condition_number`], reusing precomputed `Q` diagnostics.
pub fn condition_number_with(sys: &BilinearSystem, qhat: QHatDiagnostics) -> Result<ConditionNumber> {
    let q = qhat.qinv_norm;
    if !(q < 1.0) {
        return Err(Error::Assumption(format!(
            "||Q^-1|| = {q:.6e} is not less than one; the Neumann-series bound behind the condition number does not apply"
        )));
    }
    let (n, m, p) = (sys.n(), sys.m(), sys.p());
    let g = GramianOperator::new(sys).assemble();
    let lu = SparseLu::new(&g)?;
    // rows of (C (x) C) G^{-1} are G^{-T} applied to rows of C (x) C
    let c = sys.c().to_dense();
    let rows: Vec<Vec<f64>> = (0..p * p)
        .map(|idx| {
            let (i1, i2) = (idx / p, idx % p);
            let row: Vec<f64> = (0..n * n).map(|k| c[(i1, k / n)] * c[(i2, k % n)]).collect();
            lu.solve_transpose(&row)
        })
        .collect();
    let gram = Mat::from_fn(p * p, p * p, |i, j| rows[i].iter().zip(&rows[j]).map(|(a, b)| a * b).sum::<f64>());
    let cg_norm = svd_values(&gram)?.first().copied().unwrap_or(0.0).max(0.0).sqrt();
    let chat_qinv_norm = 2.0 * cg_norm;
    let bhat_norm = 2.0 * spectral_norm(&sys.b().to_dense()).powi(2);
    let a_norm = largest_singular_value(sys.a(), PowerOpts::default())?;
    let h2_norm = h2_norm_kron(sys)?;
    if h2_norm == 0.0 {
        return Err(Error::Invalid("the condition number is undefined for a system with zero H2 norm".into()));
    }
    let vec_i2p = (2.0 * p as f64).sqrt();
    let vec_i2m = (2.0 * m as f64).sqrt();
    let value = vec_i2p * chat_qinv_norm * q * bhat_norm * vec_i2m * a_norm / (h2_norm * (1.0 - q));
    Ok(ConditionNumber { value, vec_i2p, chat_qinv_norm, qinv_norm: q, bhat_norm, vec_i2m, a_norm, h2_norm, qhat })
}
