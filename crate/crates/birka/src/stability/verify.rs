use super::PerturbationF;
use crate::birka::{petrov_galerkin_project, ReducedModel};
use crate::linalg::{frobenius, inverse, spectral_norm, Mat};
use crate::{BilinearSystem, Error, Result};

/// Above this order the perturbed drift is not formed densely.
pub const DENSE_LIMIT: usize = 2000;

/// How far exact projection of the perturbed model is from the inexact reduced model.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionDefects {
    /// `||W_r^T F V_r||_2`
    pub reduced_f_defect: f64,
    /// Relative differences `||X_hat - X_tilde|| / ||X_tilde||` (Frobenius) for `A`, each `N_k`, `B`, `C`.
    pub a: f64,
    pub n: Vec<f64>,
    pub b: f64,
    pub c: f64,
}

impl ProjectionDefects {
    pub fn max(&self) -> f64 {
        self.n.iter().copied().fold(self.a.max(self.b).max(self.c), f64::max)
    }
}

fn rel(x: &Mat<f64>, y: &Mat<f64>) -> f64 {
    let d = frobenius(&(x - y));
    let s = frobenius(y);
    if s > 0.0 {
        d / s
    } else {
        d
    }
}

/// Projects `(A + F, N_k, B, C)` and `(A, N_k, B, C)` onto `(V_r, W_r)` separately and compares.
pub fn verify_backward_stability(sys: &BilinearSystem, v_r: &Mat<f64>, w_r: &Mat<f64>, f: &PerturbationF) -> Result<ProjectionDefects> {
    if f.n() != sys.n() {
        return Err(Error::Dimension(format!("F has order {}, system has {}", f.n(), sys.n())));
    }
    let reduced_f_defect = spectral_norm(&(w_r.transpose() * f.mul(v_r)));
    let tilde = petrov_galerkin_project(sys, v_r, w_r)?;
    let hat = if sys.n() <= DENSE_LIMIT {
        petrov_galerkin_project(&sys.perturbed(&f.to_dense())?, v_r, w_r)?
    } else {
        let e = inverse(&(w_r.transpose() * v_r), "W_r^T V_r")?;
        let mut m = tilde.clone();
        m.a = &tilde.a + &e * (w_r.transpose() * f.mul(v_r));
        m
    };
    Ok(compare(&hat, &tilde, reduced_f_defect))
}

fn compare(hat: &ReducedModel, tilde: &ReducedModel, reduced_f_defect: f64) -> ProjectionDefects {
    ProjectionDefects {
        reduced_f_defect,
        a: rel(&hat.a, &tilde.a),
        n: hat.n.iter().zip(&tilde.n).map(|(x, y)| rel(x, y)).collect(),
        b: rel(&hat.b, &tilde.b),
        c: rel(&hat.c, &tilde.c),
    }
}
