use super::{realify, ReducedModel, SolverMode};
use crate::linalg::{c64, cond2, eig_dense, frobenius, inverse, orth, to_complex, transpose, vec, EigenDecomposition, Mat};
use crate::solvers::{bicg_dual_solve, build_ilut, build_operator, direct_solve, BicgOptions, KroneckerOperator, SolveReport};
use crate::{BilinearSystem, Error, Result};

/// Everything one step produced besides the new guess.
#[derive(Debug, Clone)]
pub struct CapturedBases {
    /// Shifts: eigenvalues of the drift the step started from.
    pub lambda: Vec<c64>,
    pub primal: SolveReport,
    pub dual: SolveReport,
    /// Orthonormal real bases.
    pub v_r: Mat<f64>,
    pub w_r: Mat<f64>,
    /// Residuals `M x - rhs` carried into the orthonormal frames, so that
    /// `realify(R_B) = r_b Z_V` with `realify(V) = V_r Z_V`.
    pub r_b: Mat<f64>,
    pub r_c: Mat<f64>,
}

#[derive(Debug, Clone)]
pub struct BirkaStep {
    pub guess: ReducedModel,
    pub bases: CapturedBases,
    /// Shifts with nonnegative real part.
    pub unstable_shifts: usize,
    /// `cond(W_r^T V_r)`
    pub projector_cond: f64,
    /// `||(W_r^T V_r)^{-1} W_r^T||_F`
    pub oblique_factor_frobenius: f64,
}

/// One outer step starting from `guess`.
pub fn birka_step(sys: &BilinearSystem, guess: &ReducedModel, solver: &SolverMode) -> Result<BirkaStep> {
    let r = guess.order();
    if guess.n.len() != sys.m() || guess.b.ncols() != sys.m() || guess.c.nrows() != sys.p() {
        return Err(Error::Dimension("reduced guess does not match the input/output counts of the system".into()));
    }
    let data = shift_data(guess)?;
    let eig = &data.eig;
    let op = build_operator(&eig.values, &data.ncc, sys)?;
    let (rhs_primal, rhs_dual) = rhs(sys, &data);
    let (primal, dual) = match *solver {
        SolverMode::Direct => direct_solve(&op, &rhs_primal, &rhs_dual)?,
        SolverMode::Bicg { tol, maxit, precond_drop_tol } => {
            let pre = precond_drop_tol.map(|d| build_ilut(&op, d)).transpose()?;
            bicg_dual_solve(&op, &rhs_primal, &rhs_dual, BicgOptions { tol, maxit, precond: pre.as_ref() })?
        }
    };

    let (v_r, zv) = real_frame(&primal.solution, &eig.values, "V")?;
    let (w_r, zw) = real_frame(&dual.solution, &eig.values, "W")?;
    let zv_inv = inverse(&zv, "triangular factor of V")?;
    let zw_inv = inverse(&zw, "triangular factor of W")?;
    let r_b = -(realify(&primal.residual, &eig.values)? * &zv_inv);
    let r_c = -(realify(&dual.residual, &eig.values)? * &zw_inv);

    let proj = project(sys, &v_r, &w_r)?;
    debug_assert_eq!(proj.model.order(), r);
    Ok(BirkaStep {
        guess: proj.model,
        unstable_shifts: op.unstable_shifts,
        projector_cond: proj.cond,
        oblique_factor_frobenius: frobenius(&proj.oblique),
        bases: CapturedBases { lambda: data.eig.values, primal, dual, v_r, w_r, r_b, r_c },
    })
}

struct ShiftData {
    eig: EigenDecomposition,
    bcc: Mat<c64>,
    ccc: Mat<c64>,
    ncc: Vec<Mat<c64>>,
}

/// `Ar = R Lambda R^{-1}`, `Bcc = Br^T R^{-T}`, `Ccc = Cr R`, `Ncc_k = R^T Nr_k^T R^{-T}`.
fn shift_data(guess: &ReducedModel) -> Result<ShiftData> {
    let eig = eig_dense(&guess.a)?;
    if eig.defective {
        return Err(Error::Assumption(format!(
            "reduced drift must be diagonalizable (eigenvector condition {:.3e})",
            eig.cond
        )));
    }
    let rv = &eig.vectors;
    let rinv_t = transpose(&inverse(rv, "eigenvector matrix of the reduced drift")?);
    let bcc = transpose(&to_complex(&guess.b)) * &rinv_t;
    let ccc = to_complex(&guess.c) * rv;
    let ncc = guess.n.iter().map(|nk| transpose(rv) * to_complex(&transpose(nk)) * &rinv_t).collect();
    Ok(ShiftData { eig, bcc, ccc, ncc })
}

/// The Kronecker operator a step started from `guess` would solve with.
pub fn step_operator<'a>(sys: &'a BilinearSystem, guess: &ReducedModel) -> Result<KroneckerOperator<'a>> {
    let data = shift_data(guess)?;
    build_operator(&data.eig.values, &data.ncc, sys)
}

/// Vectorized right-hand sides `vec(B Bcc)` and `vec(C^T Ccc)` of a step started from `guess`.
pub fn step_rhs(sys: &BilinearSystem, guess: &ReducedModel) -> Result<(Vec<c64>, Vec<c64>)> {
    Ok(rhs(sys, &shift_data(guess)?))
}

fn rhs(sys: &BilinearSystem, data: &ShiftData) -> (Vec<c64>, Vec<c64>) {
    (vec(&sys.b().mul_dense(&data.bcc)), vec(&sys.c().mul_t_dense(&data.ccc)))
}

fn real_frame(x: &Mat<c64>, lambda: &[c64], name: &str) -> Result<(Mat<f64>, Mat<f64>)> {
    let o = orth(&realify(x, lambda)?, None);
    match o.z {
        Some(z) if !o.rank_deficient => Ok((o.q, z)),
        _ => Err(Error::Assumption(format!(
            "realified {name} lost rank ({} of {} columns); the projection basis must have full rank",
            o.rank(),
            x.ncols()
        ))),
    }
}

pub(crate) struct Projection {
    pub model: ReducedModel,
    pub cond: f64,
    /// `(W^T V)^{-1} W^T`
    pub oblique: Mat<f64>,
}

/// `Ar = (W^T V)^{-1} W^T A V`, `Nr_k` likewise, `Br = (W^T V)^{-1} W^T B`, `Cr = C V`.
pub(crate) fn project(sys: &BilinearSystem, v: &Mat<f64>, w: &Mat<f64>) -> Result<Projection> {
    let e = w.transpose() * v;
    let einv = inverse(&e, "W_r^T V_r, assumed to be invertible for the Petrov-Galerkin projection").map_err(|err| match err {
        Error::Singular(s) => Error::Assumption(s),
        other => other,
    })?;
    let oblique = &einv * w.transpose();
    let model = ReducedModel {
        a: &oblique * sys.a().mul_dense(v),
        n: sys.ns().iter().map(|nk| &oblique * nk.mul_dense(v)).collect(),
        b: &oblique * sys.b().to_dense(),
        c: sys.c().mul_dense(v),
    };
    Ok(Projection { model, cond: cond2(&e)?, oblique })
}

/// Petrov-Galerkin projection of `sys` onto `(V, W)`; public form of the projection inside a step.
pub fn petrov_galerkin_project(sys: &BilinearSystem, v: &Mat<f64>, w: &Mat<f64>) -> Result<ReducedModel> {
    if v.nrows() != sys.n() || w.nrows() != sys.n() || v.ncols() != w.ncols() {
        return Err(Error::Dimension(format!(
            "projection bases are {}x{} and {}x{} for a system of order {}",
            v.nrows(),
            v.ncols(),
            w.nrows(),
            w.ncols(),
            sys.n()
        )));
    }
    project(sys, v, w).map(|p| p.model)
}
