use super::{solve_generalized_lyapunov, BilinearSystem, GramianOperator};
use crate::error::{dim_err, Result};
use crate::linalg::{vec, SparseLu, SparseMatrix};
use crate::Error;

const NEG_TOL: f64 = 1e-12;

/// `vec(B B^T) = (B (x) B) vec(I_m)`.
fn bbt_vec(sys: &BilinearSystem) -> Vec<f64> {
    let b = sys.b().to_dense();
    vec(&(&b * b.transpose()))
}

/// `vec(C^T C)`, so that `vec(I_p)^T (C (x) C) x = vec(C^T C) . x`.
fn ctc_vec(sys: &BilinearSystem) -> Vec<f64> {
    let c = sys.c().to_dense();
    vec(&(c.transpose() * &c))
}

fn check_square(value: f64, scale: f64, route: &str) -> Result<f64> {
    if !value.is_finite() {
        return Err(Error::Singular(format!("{route}: non-finite H2 quadratic form")));
    }
    if value < -NEG_TOL * scale.max(1.0) {
        return Err(Error::Assumption(format!(
            "{route}: H2 quadratic form is negative ({value:.3e}); the system is not stable enough for an H2 norm"
        )));
    }
    Ok(value.max(0.0))
}

/// Squared H2 norm through the assembled Kronecker system `G vec(P) = vec(B B^T)`.
pub fn h2_norm_squared_kron(sys: &BilinearSystem) -> Result<f64> {
    let g = GramianOperator::new(sys).assemble();
    let lu = SparseLu::new(&g).map_err(|e| match e {
        Error::Singular(s) => Error::Singular(format!("H2 Gramian operator is singular: {s}")),
        other => other,
    })?;
    let x = lu.solve(&bbt_vec(sys));
    let w = ctc_vec(sys);
    let value: f64 = w.iter().zip(&x).map(|(a, b)| a * b).sum();
    let scale = w.iter().zip(&x).map(|(a, b)| (a * b).abs()).sum::<f64>();
    check_square(value, scale, "kron route")
}

pub fn h2_norm_kron(sys: &BilinearSystem) -> Result<f64> {
    h2_norm_squared_kron(sys).map(f64::sqrt)
}

/// Squared H2 norm as `trace(C P C^T)` with `P` the generalized reachability Gramian.
pub fn h2_norm_squared_lyap(sys: &BilinearSystem) -> Result<f64> {
    let sol = solve_generalized_lyapunov(sys)?;
    let c = sys.c().to_dense();
    let cpc = &c * &sol.p * c.transpose();
    let value: f64 = (0..cpc.nrows()).map(|i| cpc[(i, i)]).sum();
    let scale = crate::linalg::frobenius(&c).powi(2) * crate::linalg::frobenius(&sol.p);
    check_square(value, scale, "Lyapunov route")
}

pub fn h2_norm_lyap(sys: &BilinearSystem) -> Result<f64> {
    h2_norm_squared_lyap(sys).map(f64::sqrt)
}

/// `A = diag(A1, A2)`, `N_k = diag(N_k1, N_k2)`, `B = [B1; B2]`, `C = [C1, -C2]`.
pub fn error_system(s1: &BilinearSystem, s2: &BilinearSystem) -> Result<BilinearSystem> {
    if s1.m() != s2.m() || s1.p() != s2.p() {
        return dim_err(format!(
            "error system needs matching channels: (m, p) = ({}, {}) vs ({}, {})",
            s1.m(),
            s1.p(),
            s2.m(),
            s2.p()
        ));
    }
    let (n1, n2) = (s1.n(), s2.n());
    let n = n1 + n2;
    let diag = |x: &SparseMatrix, y: &SparseMatrix| {
        let mut t = x.triplets();
        t.extend(y.iter().map(|(i, j, v)| (i + n1, j + n1, v)));
        SparseMatrix::try_from_triplets(n, n, &t).expect("block-diagonal coordinates are unique")
    };
    let a = diag(s1.a(), s2.a());
    let ns = s1.ns().iter().zip(s2.ns()).map(|(x, y)| diag(x, y)).collect();
    let mut bt = s1.b().triplets();
    bt.extend(s2.b().iter().map(|(i, j, v)| (i + n1, j, v)));
    let b = SparseMatrix::try_from_triplets(n, s1.m(), &bt)?;
    let mut ct = s1.c().triplets();
    ct.extend(s2.c().iter().map(|(i, j, v)| (i, j + n1, -v)));
    let c = SparseMatrix::try_from_triplets(s1.p(), n, &ct)?;
    BilinearSystem::new(a, ns, b, c)
}

/// `||s1 - s2||_H2^2`.
pub fn h2_error_squared(s1: &BilinearSystem, s2: &BilinearSystem) -> Result<f64> {
    h2_norm_squared_kron(&error_system(s1, s2)?)
}

pub fn h2_error(s1: &BilinearSystem, s2: &BilinearSystem) -> Result<f64> {
    h2_error_squared(s1, s2).map(f64::sqrt)
}
