use crate::linalg::{c64, unvec, vecops, Mat};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SolveMode {
    Direct,
    Bicg,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Preconditioner {
    None,
    Ilut { drop_tol: f64 },
}

/// Outcome of one side (primal or dual) of a solve.
#[derive(Debug, Clone)]
pub struct SolveReport {
    /// n x r solution (`V` or `W`).
    pub solution: Mat<c64>,
    /// n x r residual `rhs - op * solution`, recomputed from the final iterate.
    pub residual: Mat<c64>,
    pub iterations: usize,
    pub relative_residual_history: Vec<f64>,
    pub tolerance_used: f64,
    /// `||residual|| / ||rhs||`
    pub relative_residual: f64,
    pub converged: bool,
    pub hit_maxit: bool,
    pub stagnated: bool,
    pub mode: SolveMode,
    pub preconditioner: Preconditioner,
    /// `|trace(W^T R_B)|` for the primal side, `|trace(R_C^T V)|` for the dual.
    pub pg_defect: f64,
}

impl SolveReport {
    pub(crate) fn new(
        n: usize,
        r: usize,
        x: &[c64],
        rhs: &[c64],
        applied: &[c64],
        mode: SolveMode,
        preconditioner: Preconditioner,
        tol: f64,
    ) -> Self {
        let res = vecops::sub(rhs, applied);
        let nb = vecops::norm2(rhs);
        let rel = if nb > 0.0 { vecops::norm2(&res) / nb } else { vecops::norm2(&res) };
        Self {
            solution: unvec(x, n, r).expect("solution length"),
            residual: unvec(&res, n, r).expect("residual length"),
            iterations: 0,
            relative_residual_history: Vec::new(),
            tolerance_used: tol,
            relative_residual: rel,
            converged: rel <= tol,
            hit_maxit: false,
            stagnated: false,
            mode,
            preconditioner,
            pg_defect: 0.0,
        }
    }
}

/// `|trace(X^T Y)|` with the plain (bilinear) transpose.
pub(crate) fn trace_defect(x: &Mat<c64>, y: &Mat<c64>) -> f64 {
    let mut s = c64::new(0.0, 0.0);
    for j in 0..x.ncols() {
        for i in 0..x.nrows() {
            s += x[(i, j)] * y[(i, j)];
        }
    }
    s.norm()
}
