//! The bilinear iterative rational Krylov algorithm.
//!
//! Each outer step diagonalizes the current reduced drift `Ar = R Lambda R^{-1}`,
//! solves the primal and dual Kronecker systems built from `Lambda` and the
//! transformed reduced matrices, orthonormalizes the (realified) solutions and
//! projects the full model onto them. The iteration stops once the sorted
//! eigenvalues of `Ar` move by less than `btol` relative to the previous step.

mod init;
mod output;
mod realify;
mod run;
mod step;

pub use init::{initialize_guess, MAX_RESAMPLES};
pub use realify::realify;
pub use run::{relative_eigenvalue_change, run_birka, run_birka_from, sort_eigenvalues, BirkaResult, IterationRecord, SolveSummary};
pub use step::{birka_step, petrov_galerkin_project, step_operator, step_rhs, BirkaStep, CapturedBases};

use crate::linalg::{Mat, SparseMatrix};
use crate::{BilinearSystem, Error, Result};
use serde::Serialize;

/// How the two Kronecker systems of a step are solved.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SolverMode {
    /// Sparse LU of the assembled operator.
    Direct,
    /// Coupled BiCG, optionally with an ILUT preconditioner.
    Bicg { tol: f64, maxit: Option<usize>, precond_drop_tol: Option<f64> },
}

impl SolverMode {
    pub fn bicg(tol: f64) -> Self {
        SolverMode::Bicg { tol, maxit: None, precond_drop_tol: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BirkaConfig {
    pub r: usize,
    pub btol: f64,
    pub max_outer: usize,
    pub solver: SolverMode,
    pub seed: u64,
    /// Keep the solver outputs and bases of every step (needed for stability reports).
    pub capture_bases: bool,
    /// Evaluate `||sys - reduced||_H2` after every step.
    pub track_h2_error: bool,
}

impl BirkaConfig {
    pub fn new(r: usize) -> Self {
        Self {
            r,
            btol: 1e-6,
            max_outer: 100,
            solver: SolverMode::Direct,
            seed: 0,
            capture_bases: false,
            track_h2_error: false,
        }
    }

    pub fn btol(mut self, btol: f64) -> Self {
        self.btol = btol;
        self
    }

    pub fn max_outer(mut self, max_outer: usize) -> Self {
        self.max_outer = max_outer;
        self
    }

    pub fn solver(mut self, solver: SolverMode) -> Self {
        self.solver = solver;
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn capture_bases(mut self, yes: bool) -> Self {
        self.capture_bases = yes;
        self
    }

    pub fn track_h2_error(mut self, yes: bool) -> Self {
        self.track_h2_error = yes;
        self
    }

    /// Checks the configuration against a full model of order `n`.
    pub fn validate(&self, n: usize) -> Result<()> {
        if self.r == 0 || self.r >= n {
            return Err(Error::Invalid(format!("reduced order must satisfy 1 <= r < n = {n}, got r = {}", self.r)));
        }
        if !(self.btol > 0.0 && self.btol.is_finite()) {
            return Err(Error::Invalid(format!("btol must be positive, got {}", self.btol)));
        }
        if self.max_outer == 0 {
            return Err(Error::Invalid("max_outer must be at least 1".into()));
        }
        if let SolverMode::Bicg { tol, maxit, precond_drop_tol } = self.solver {
            if !(tol > 0.0 && tol < 1.0) {
                return Err(Error::Invalid(format!("BiCG tolerance must lie in (0, 1), got {tol}")));
            }
            if maxit == Some(0) {
                return Err(Error::Invalid("BiCG maxit must be at least 1".into()));
            }
            if let Some(d) = precond_drop_tol {
                if !(d >= 0.0 && d.is_finite()) {
                    return Err(Error::Invalid(format!("drop tolerance must be finite and >= 0, got {d}")));
                }
            }
        }
        Ok(())
    }
}

/// A reduced model `(Ar, {Nr_k}, Br, Cr)` held densely; also the guess BIRKA iterates on.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedModel {
    pub a: Mat<f64>,
    pub n: Vec<Mat<f64>>,
    pub b: Mat<f64>,
    pub c: Mat<f64>,
}

impl ReducedModel {
    pub fn order(&self) -> usize {
        self.a.nrows()
    }

    pub fn to_system(&self) -> Result<BilinearSystem> {
        BilinearSystem::from_dense(&self.a, &self.n, &self.b, &self.c)
    }

    pub fn from_system(sys: &BilinearSystem) -> Self {
        Self {
            a: sys.a().to_dense(),
            n: sys.ns().iter().map(SparseMatrix::to_dense).collect(),
            b: sys.b().to_dense(),
            c: sys.c().to_dense(),
        }
    }
}
