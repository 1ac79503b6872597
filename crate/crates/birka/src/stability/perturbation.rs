use crate::linalg::{frobenius, inverse, orth, svd_values, Mat};
use crate::{Error, Result};

/// Backward perturbation `F = R_B K W^T + V K R_C^T` with `K = (W^T V)^{-1}`, kept factored.
///
/// With exact Petrov-Galerkin residuals (`W^T R_B = 0`, `R_C^T V = 0`) it maps
/// `F V = R_B` and `W^T F = R_C^T`, so the inexact solves are exact solves for `A + F`.
#[derive(Debug, Clone)]
pub struct PerturbationF {
    /// `F = u y^T`, `u = [R_B, V]`, `y = [W K^T, R_C K^T]`.
    u: Mat<f64>,
    y: Mat<f64>,
    pub v_tilde: Mat<f64>,
    pub w_tilde: Mat<f64>,
    pub r_b: Mat<f64>,
    pub r_c: Mat<f64>,
    /// `(W^T V)^{-1}`
    pub k: Mat<f64>,
    pub norm_2: f64,
    pub norm_f: f64,
}

fn check_frames(v: &Mat<f64>, w: &Mat<f64>, r_b: &Mat<f64>, r_c: &Mat<f64>) -> Result<()> {
    let (n, r) = (v.nrows(), v.ncols());
    for (name, m) in [("W", w), ("R_B", r_b), ("R_C", r_c)] {
        if m.nrows() != n || m.ncols() != r {
            return Err(Error::Dimension(format!("{name} is {}x{}, expected {n}x{r}", m.nrows(), m.ncols())));
        }
    }
    if r == 0 {
        return Err(Error::Dimension("empty bases".into()));
    }
    Ok(())
}

fn k_matrix(v: &Mat<f64>, w: &Mat<f64>) -> Result<Mat<f64>> {
    inverse(&(w.transpose() * v), "W^T V, assumed nonsingular for the backward perturbation").map_err(|e| match e {
        Error::Singular(s) => Error::Assumption(s),
        other => other,
    })
}

pub fn construct_perturbation(v_tilde: &Mat<f64>, w_tilde: &Mat<f64>, r_b: &Mat<f64>, r_c: &Mat<f64>) -> Result<PerturbationF> {
    check_frames(v_tilde, w_tilde, r_b, r_c)?;
    let (n, r) = (v_tilde.nrows(), v_tilde.ncols());
    let k = k_matrix(v_tilde, w_tilde)?;
    let kt = k.transpose();
    let wk = w_tilde * kt;
    let rk = r_c * kt;
    let u = Mat::from_fn(n, 2 * r, |i, j| if j < r { r_b[(i, j)] } else { v_tilde[(i, j - r)] });
    let y = Mat::from_fn(n, 2 * r, |i, j| if j < r { wk[(i, j)] } else { rk[(i, j - r)] });
    let (norm_2, norm_f) = low_rank_norms(&u, &y)?;
    Ok(PerturbationF {
        u,
        y,
        v_tilde: v_tilde.clone(),
        w_tilde: w_tilde.clone(),
        r_b: r_b.clone(),
        r_c: r_c.clone(),
        k,
        norm_2,
        norm_f,
    })
}

/// 2- and Frobenius norms of `u y^T` from the triangular factors of `u` and `y`.
fn low_rank_norms(u: &Mat<f64>, y: &Mat<f64>) -> Result<(f64, f64)> {
    let tri = |m: &Mat<f64>| {
        let qr = m.qr();
        let r = qr.thin_R();
        Mat::from_fn(r.nrows(), r.ncols(), |i, j| if i <= j { r[(i, j)] } else { 0.0 })
    };
    let core = tri(u) * tri(y).transpose();
    let sv = svd_values(&core)?;
    Ok((sv.first().copied().unwrap_or(0.0), frobenius(&core)))
}

impl PerturbationF {
    /// `Z^T F Z` for an orthonormal basis `Z` of `span[u, y]`; `F = Z (Z^T F Z) Z^T`.
    pub fn compressed(&self) -> Mat<f64> {
        let (n, c) = (self.u.nrows(), self.u.ncols());
        let both = Mat::from_fn(n, 2 * c, |i, j| if j < c { self.u[(i, j)] } else { self.y[(i, j - c)] });
        let z = orth(&both, None).q;
        (z.transpose() * &self.u) * (z.transpose() * &self.y).transpose()
    }

    pub fn n(&self) -> usize {
        self.u.nrows()
    }

    pub fn r(&self) -> usize {
        self.v_tilde.ncols()
    }

    /// `F x`
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let t: Vec<f64> = (0..self.y.ncols()).map(|j| (0..self.n()).map(|i| self.y[(i, j)] * x[i]).sum()).collect();
        (0..self.n()).map(|i| (0..t.len()).map(|j| self.u[(i, j)] * t[j]).sum()).collect()
    }

    /// `F^T x`
    pub fn apply_transpose(&self, x: &[f64]) -> Vec<f64> {
        let t: Vec<f64> = (0..self.u.ncols()).map(|j| (0..self.n()).map(|i| self.u[(i, j)] * x[i]).sum()).collect();
        (0..self.n()).map(|i| (0..t.len()).map(|j| self.y[(i, j)] * t[j]).sum()).collect()
    }

    /// `F M` for a dense block `M`.
    pub fn mul(&self, m: &Mat<f64>) -> Mat<f64> {
        &self.u * (self.y.transpose() * m)
    }

    /// `M^T F` for a dense block `M`.
    pub fn tmul(&self, m: &Mat<f64>) -> Mat<f64> {
        (m.transpose() * &self.u) * self.y.transpose()
    }

    pub fn to_dense(&self) -> Mat<f64> {
        &self.u * self.y.transpose()
    }

    /// `||K W^T||_F`, the quantity tabulated against the reduced order.
    pub fn oblique_frobenius(&self) -> f64 {
        frobenius(&(&self.k * self.w_tilde.transpose()))
    }
}

/// Terms of the residual-based bound on `||F||_F`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerturbationBound {
    /// `sqrt(r) (max_i ||R_B e_i|| ||K W^T||_F + max_i ||R_C e_i|| ||V K||_F)`
    pub value: f64,
    pub max_col_r_b: f64,
    pub max_col_r_c: f64,
    /// `||K W^T||_F`
    pub left_frobenius: f64,
    /// `||V K||_F`
    pub right_frobenius: f64,
}

pub fn perturbation_bound(r_b: &Mat<f64>, r_c: &Mat<f64>, v_tilde: &Mat<f64>, w_tilde: &Mat<f64>) -> Result<PerturbationBound> {
    check_frames(v_tilde, w_tilde, r_b, r_c)?;
    let k = k_matrix(v_tilde, w_tilde)?;
    let left_frobenius = frobenius(&(&k * w_tilde.transpose()));
    let right_frobenius = frobenius(&(v_tilde * &k));
    let max_col = |m: &Mat<f64>| {
        (0..m.ncols())
            .map(|j| (0..m.nrows()).map(|i| m[(i, j)].powi(2)).sum::<f64>().sqrt())
            .fold(0.0, f64::max)
    };
    let (max_col_r_b, max_col_r_c) = (max_col(r_b), max_col(r_c));
    let r = v_tilde.ncols() as f64;
    Ok(PerturbationBound {
        value: r.sqrt() * (max_col_r_b * left_frobenius + max_col_r_c * right_frobenius),
        max_col_r_b,
        max_col_r_c,
        left_frobenius,
        right_frobenius,
    })
}
