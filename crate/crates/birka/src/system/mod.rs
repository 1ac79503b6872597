//! The bilinear system `(A, {N_k}, B, C)`, its H2 norm and Gramian diagnostics.

mod gramian;
mod h2;
pub mod io;
mod lyapunov;
mod qhat;

pub use gramian::GramianOperator;
pub use h2::{error_system, h2_error, h2_error_squared, h2_norm_kron, h2_norm_lyap, h2_norm_squared_kron, h2_norm_squared_lyap};
pub use lyapunov::{solve_generalized_lyapunov, LyapunovPath, LyapunovSolution};
pub use qhat::{assemble_qhat, qhat_diagnostics, QHatDiagnostics};

use crate::error::{dim_err, Result};
use crate::linalg::{eig_dense, Mat, SparseMatrix};

/// `x' = A x + sum_k N_k x u_k + B u`, `y = C x`.
#[derive(Debug, Clone, PartialEq)]
pub struct BilinearSystem {
    a: SparseMatrix,
    n: Vec<SparseMatrix>,
    b: SparseMatrix,
    c: SparseMatrix,
    pub label: String,
}

impl BilinearSystem {
    /// One `N_k` per input column of `B`.
    pub fn new(a: SparseMatrix, n: Vec<SparseMatrix>, b: SparseMatrix, c: SparseMatrix) -> Result<Self> {
        let dim = a.nrows();
        if a.ncols() != dim || dim == 0 {
            return dim_err(format!("A must be square and nonempty, got {}x{}", a.nrows(), a.ncols()));
        }
        if b.nrows() != dim || b.ncols() == 0 {
            return dim_err(format!("B is {}x{}, expected {dim}xm with m >= 1", b.nrows(), b.ncols()));
        }
        if c.ncols() != dim || c.nrows() == 0 {
            return dim_err(format!("C is {}x{}, expected px{dim} with p >= 1", c.nrows(), c.ncols()));
        }
        if n.len() != b.ncols() {
            return dim_err(format!("{} bilinear matrices for {} inputs", n.len(), b.ncols()));
        }
        for (k, nk) in n.iter().enumerate() {
            if nk.nrows() != dim || nk.ncols() != dim {
                return dim_err(format!("N{} is {}x{}, expected {dim}x{dim}", k + 1, nk.nrows(), nk.ncols()));
            }
        }
        if !(a.is_finite() && b.is_finite() && c.is_finite() && n.iter().all(SparseMatrix::is_finite)) {
            return Err(crate::Error::Invalid("system matrices contain non-finite entries".into()));
        }
        Ok(Self { a, n, b, c, label: String::new() })
    }

    pub fn from_dense(a: &Mat<f64>, n: &[Mat<f64>], b: &Mat<f64>, c: &Mat<f64>) -> Result<Self> {
        Self::new(
            SparseMatrix::from_dense(a),
            n.iter().map(SparseMatrix::from_dense).collect(),
            SparseMatrix::from_dense(b),
            SparseMatrix::from_dense(c),
        )
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// State dimension.
    pub fn n(&self) -> usize {
        self.a.nrows()
    }

    /// Number of inputs.
    pub fn m(&self) -> usize {
        self.b.ncols()
    }

    /// Number of outputs.
    pub fn p(&self) -> usize {
        self.c.nrows()
    }

    pub fn a(&self) -> &SparseMatrix {
        &self.a
    }

    pub fn ns(&self) -> &[SparseMatrix] {
        &self.n
    }

    pub fn b(&self) -> &SparseMatrix {
        &self.b
    }

    pub fn c(&self) -> &SparseMatrix {
        &self.c
    }

    /// Copy with `A` replaced by `A + F`.
    pub fn perturbed(&self, f: &Mat<f64>) -> Result<Self> {
        if f.nrows() != self.n() || f.ncols() != self.n() {
            return dim_err(format!("perturbation is {}x{}, expected {n}x{n}", f.nrows(), f.ncols(), n = self.n()));
        }
        let a = self.a.add_scaled(1.0, &SparseMatrix::from_dense(f))?;
        Ok(Self { a, ..self.clone() })
    }

    /// Largest real part of the spectrum of `A` (dense eigensolve).
    pub fn spectral_abscissa(&self) -> Result<f64> {
        let e = eig_dense(&self.a.to_dense())?;
        Ok(e.values.iter().map(|v| v.re).fold(f64::NEG_INFINITY, f64::max))
    }

    /// All eigenvalues of `A` in the open left half-plane.
    pub fn is_stable(&self) -> Result<bool> {
        Ok(self.spectral_abscissa()? < 0.0)
    }
}
