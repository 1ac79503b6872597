use crate::linalg::SparseMatrix;
use crate::{BilinearSystem, Error, Result};
use serde::{Deserialize, Serialize};

/// Heat equation on the unit square, `K x K` interior grid, `h = 1/(K+1)`.
///
/// Two inputs act through Robin-type boundary conditions on two edges; the
/// output is the mean temperature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeatModelParams {
    pub k: usize,
}

impl HeatModelParams {
    pub fn new(k: usize) -> Self {
        Self { k }
    }

    pub fn h(&self) -> f64 {
        1.0 / (self.k as f64 + 1.0)
    }
}

/// `A = (I (x) T + T (x) I + E1 (x) I + I (x) EK) / h^2`, `N1 = E1 (x) I / h`,
/// `N2 = I (x) EK / h`, `B = [e1 (x) e, e (x) eK] / h`, `C = (e (x) e)^T / K^2`.
pub fn build_heat_model(params: &HeatModelParams) -> Result<BilinearSystem> {
    let k = params.k;
    if k < 2 {
        return Err(Error::Invalid(format!("heat model needs K >= 2, got {k}")));
    }
    let h = params.h();
    let eye = SparseMatrix::<f64>::identity(k);
    let mut t = Vec::with_capacity(3 * k);
    for i in 0..k {
        t.push((i, i, -2.0));
        if i + 1 < k {
            t.push((i, i + 1, 1.0));
            t.push((i + 1, i, 1.0));
        }
    }
    let tk = SparseMatrix::try_from_triplets(k, k, &t)?;
    let e1 = SparseMatrix::try_from_triplets(k, k, &[(0, 0, 1.0)])?;
    let ek = SparseMatrix::try_from_triplets(k, k, &[(k - 1, k - 1, 1.0)])?;

    let mut a = Vec::new();
    for m in [eye.kron(&tk), tk.kron(&eye), e1.kron(&eye), eye.kron(&ek)] {
        a.extend(m.iter().map(|(i, j, v)| (i, j, v / (h * h))));
    }
    let n = k * k;
    let a = SparseMatrix::from_triplets_summed(n, n, &a)?;
    let n1 = e1.kron(&eye).scale(1.0 / h);
    let n2 = eye.kron(&ek).scale(1.0 / h);

    // e1 (x) e: first K entries; e (x) eK: every K-th entry starting at K-1
    let mut b = Vec::with_capacity(2 * k);
    for i in 0..k {
        b.push((i, 0, 1.0 / h));
        b.push((i * k + k - 1, 1, 1.0 / h));
    }
    let b = SparseMatrix::from_triplets_summed(n, 2, &b)?;
    let c: Vec<_> = (0..n).map(|j| (0, j, 1.0 / (k * k) as f64)).collect();
    let c = SparseMatrix::try_from_triplets(1, n, &c)?;
    Ok(BilinearSystem::new(a, vec![n1, n2], b, c)?.with_label(format!("heat K={k}")))
}
