use super::{BilinearSystem, GramianOperator};
use crate::linalg::{c64, eig_dense, frobenius, inverse, unvec, vec, Mat, SparseLu};
use crate::{Error, Result};

/// Largest `n^2` for the assembled Kronecker fallback.
pub const KRON_FALLBACK_MAX: usize = 40_000;
const MAX_SWEEPS: usize = 500;
const RESIDUAL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LyapunovPath {
    /// Stationary iteration with standard-Lyapunov inner solves.
    Stationary { sweeps: usize },
    /// Assembled Kronecker direct solve.
    Kronecker,
}

#[derive(Debug, Clone)]
pub struct LyapunovSolution {
    pub p: Mat<f64>,
    pub path: LyapunovPath,
    /// `||A P + P A^T + sum N P N^T + B B^T||_F / ||B B^T||_F`
    pub relative_residual: f64,
}

/// Solve `A P + P A^T + sum_k N_k P N_k^T = -B B^T`.
///
/// Runs the stationary iteration `A P' + P' A^T = -B B^T - sum N_k P N_k^T` first.
/// If `A` is badly conditioned for the eigenbasis inner solve, the sweep diverges,
/// or the final residual misses `1e-10`, falls back to the assembled Kronecker
/// solve when `n^2 <= 40000`.
pub fn solve_generalized_lyapunov(sys: &BilinearSystem) -> Result<LyapunovSolution> {
    let n = sys.n();
    let b = sys.b().to_dense();
    let bbt = &b * b.transpose();
    let scale = frobenius(&bbt);
    if scale == 0.0 {
        return Ok(LyapunovSolution { p: Mat::zeros(n, n), path: LyapunovPath::Stationary { sweeps: 0 }, relative_residual: 0.0 });
    }
    let a = sys.a().to_dense();
    let ns: Vec<Mat<f64>> = sys.ns().iter().map(|m| m.to_dense()).collect();

    if let Some((p, sweeps)) = stationary(&a, &ns, &bbt) {
        let res = residual(&a, &ns, &bbt, &p) / scale;
        if res <= RESIDUAL_TOL {
            return Ok(LyapunovSolution { p, path: LyapunovPath::Stationary { sweeps }, relative_residual: res });
        }
    }
    if n * n > KRON_FALLBACK_MAX {
        return Err(Error::NoConvergence(format!(
            "stationary Lyapunov iteration failed and n^2 = {} exceeds the Kronecker fallback limit",
            n * n
        )));
    }
    let g = GramianOperator::new(sys).assemble();
    let lu = SparseLu::new(&g)?;
    let x = lu.solve(&vec(&bbt));
    let mut p = unvec(&x, n, n)?;
    symmetrize(&mut p);
    let res = residual(&a, &ns, &bbt, &p) / scale;
    Ok(LyapunovSolution { p, path: LyapunovPath::Kronecker, relative_residual: res })
}

fn stationary(a: &Mat<f64>, ns: &[Mat<f64>], bbt: &Mat<f64>) -> Option<(Mat<f64>, usize)> {
    let n = a.nrows();
    let eig = eig_dense(a).ok()?;
    if eig.cond > 1e8 || eig.values.iter().any(|l| l.re >= 0.0) {
        return None;
    }
    let r = &eig.vectors;
    let rinv = inverse(r, "eigenvectors of A").ok()?;
    let lam = &eig.values;
    let inner = |q: &Mat<f64>| -> Mat<f64> {
        // A P + P A^T = q  <=>  Lam Y + Y Lam = R^{-1} q R^{-T},  P = R Y R^T
        let qc = Mat::from_fn(n, n, |i, j| c64::new(q[(i, j)], 0.0));
        let t = &rinv * &qc * rinv.transpose();
        let y = Mat::from_fn(n, n, |i, j| t[(i, j)] / (lam[i] + lam[j]));
        let pc = r * &y * r.transpose();
        let mut p = Mat::from_fn(n, n, |i, j| pc[(i, j)].re);
        symmetrize(&mut p);
        p
    };
    let mut p = inner(&(-bbt));
    let mut last_step = f64::INFINITY;
    let mut growth = 0;
    for sweep in 1..=MAX_SWEEPS {
        if ns.is_empty() {
            return Some((p, sweep));
        }
        let mut q = -bbt;
        for nk in ns {
            q -= nk * &p * nk.transpose();
        }
        let next = inner(&q);
        let step = frobenius(&(&next - &p));
        let size = frobenius(&next);
        p = next;
        if !size.is_finite() {
            return None;
        }
        if step <= 1e-14 * size {
            return Some((p, sweep));
        }
        if step > last_step {
            growth += 1;
            if growth >= 5 {
                return None;
            }
        }
        last_step = step;
    }
    None
}

fn residual(a: &Mat<f64>, ns: &[Mat<f64>], bbt: &Mat<f64>, p: &Mat<f64>) -> f64 {
    let mut r = a * p + p * a.transpose() + bbt;
    for nk in ns {
        r += nk * p * nk.transpose();
    }
    frobenius(&r)
}

fn symmetrize(p: &mut Mat<f64>) {
    let n = p.nrows();
    for i in 0..n {
        for j in 0..i {
            let v = 0.5 * (p[(i, j)] + p[(j, i)]);
            p[(i, j)] = v;
            p[(j, i)] = v;
        }
    }
}
