use crate::linalg::SparseMatrix;
use crate::{BilinearSystem, Error, Result};
use serde::{Deserialize, Serialize};

/// Viscous Burgers equation on `(0, L)` with inflow control `w(0, t) = u(t)`,
/// central differences on `N` interior points, Carleman-lifted to `[w; w (x) w]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlowModelParams {
    pub n: usize,
    pub l: f64,
    pub nu: f64,
}

impl FlowModelParams {
    pub fn new(n: usize) -> Self {
        Self { n, l: 1.0, nu: 0.1 }
    }

    pub fn h(&self) -> f64 {
        self.l / (self.n as f64 + 1.0)
    }

    fn validate(&self) -> Result<()> {
        if self.n < 2 || !(self.l > 0.0) || !(self.nu > 0.0) {
            return Err(Error::Invalid(format!(
                "flow model needs N >= 2, L > 0, nu > 0; got N={}, L={}, nu={}",
                self.n, self.l, self.nu
            )));
        }
        Ok(())
    }
}

/// The semi-discrete right-hand side `(f(w), g(w))` with `w' = f(w) + g(w) u`,
/// evaluated row by row (no Kronecker structure). The first and last rows use
/// the one-sided convective forms `-w1 w2 / 2h` and `-wN w(N-1) / 2h`.
pub fn flow_rhs(params: &FlowModelParams, w: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let n = params.n;
    let h = params.h();
    let d = params.nu / (h * h);
    let mut f = vec![0.0; n];
    for i in 0..n {
        let left = if i > 0 { w[i - 1] } else { 0.0 };
        let right = if i + 1 < n { w[i + 1] } else { 0.0 };
        let conv = if i == 0 {
            -w[0] * w[1] / (2.0 * h)
        } else if i == n - 1 {
            -w[n - 1] * w[n - 2] / (2.0 * h)
        } else {
            -w[i] * (right - left) / (2.0 * h)
        };
        f[i] = conv + d * (right - 2.0 * w[i] + left);
    }
    let mut g = vec![0.0; n];
    g[0] = w[0] / (2.0 * h) + d;
    (f, g)
}

/// Flow model pieces `A1` (N x N), `A2` (N x N^2), `B0` (N), `B1` (N x N).
pub(crate) struct FlowBlocks {
    pub a1: SparseMatrix,
    pub a2: SparseMatrix,
    pub b0: Vec<f64>,
    pub b1: SparseMatrix,
}

pub(crate) fn flow_blocks(params: &FlowModelParams) -> Result<FlowBlocks> {
    params.validate()?;
    let n = params.n;
    let h = params.h();
    let d = params.nu / (h * h);
    let mut t = Vec::new();
    for i in 0..n {
        t.push((i, i, -2.0 * d));
        if i + 1 < n {
            t.push((i, i + 1, d));
            t.push((i + 1, i, d));
        }
    }
    let a1 = SparseMatrix::try_from_triplets(n, n, &t)?;

    // 0.5 * A2 (w (x) w): a product w_a w_b sits at column a*N + b, so a coefficient c
    // on w_a w_b (a != b) is split as c at both (a, b) and (b, a) after the 0.5.
    let idx = |a: usize, b: usize| a * n + b;
    let c = 1.0 / (2.0 * h);
    let mut t2 = Vec::new();
    for i in 0..n {
        if i + 1 < n {
            t2.push((i, idx(i, i + 1), -c));
            t2.push((i, idx(i + 1, i), -c));
        }
        if i > 0 {
            let s = if i == n - 1 { -c } else { c };
            t2.push((i, idx(i, i - 1), s));
            t2.push((i, idx(i - 1, i), s));
        }
    }
    let a2 = SparseMatrix::try_from_triplets(n, n * n, &t2)?;
    let mut b0 = vec![0.0; n];
    b0[0] = d;
    let b1 = SparseMatrix::try_from_triplets(n, n, &[(0, 0, c)])?;
    Ok(FlowBlocks { a1, a2, b0, b1 })
}

/// `A = [[A1, A2/2], [0, A1 (x) I + I (x) A1]]`, `N = [[B1, 0], [B0 (x) I + I (x) B0, 0]]`,
/// `B = [B0; 0]`, `C = [1 .. 1, 0 .. 0] / N`; order `N + N^2`, single input and output.
pub fn build_flow_model(params: &FlowModelParams) -> Result<BilinearSystem> {
    let FlowBlocks { a1, a2, b0, b1 } = flow_blocks(params)?;
    let n = params.n;
    let dim = n + n * n;
    let eye = SparseMatrix::<f64>::identity(n);

    let mut a = a1.triplets();
    a.extend(a2.iter().map(|(i, j, v)| (i, j + n, 0.5 * v)));
    for m in [a1.kron(&eye), eye.kron(&a1)] {
        a.extend(m.iter().map(|(i, j, v)| (i + n, j + n, v)));
    }
    let a = SparseMatrix::from_triplets_summed(dim, dim, &a)?;

    let b0m = SparseMatrix::try_from_triplets(n, 1, &b0.iter().enumerate().filter(|(_, v)| **v != 0.0).map(|(i, &v)| (i, 0, v)).collect::<Vec<_>>())?;
    let mut nt = b1.triplets();
    for m in [b0m.kron(&eye), eye.kron(&b0m)] {
        nt.extend(m.iter().map(|(i, j, v)| (i + n, j, v)));
    }
    let nmat = SparseMatrix::from_triplets_summed(dim, dim, &nt)?;

    let b = SparseMatrix::try_from_triplets(dim, 1, &[(0, 0, b0[0])])?;
    let c: Vec<_> = (0..n).map(|j| (0, j, 1.0 / n as f64)).collect();
    let c = SparseMatrix::try_from_triplets(1, dim, &c)?;
    Ok(BilinearSystem::new(a, vec![nmat], b, c)?.with_label(format!("flow N={n}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_110_for_n10() {
        let s = build_flow_model(&FlowModelParams::new(10)).unwrap();
        assert_eq!((s.n(), s.m(), s.p()), (110, 1, 1));
    }

    #[test]
    fn single_input_entry() {
        let p = FlowModelParams::new(10);
        let s = build_flow_model(&p).unwrap();
        assert_eq!(s.b().nnz(), 1);
        assert!((s.b().get(0, 0) - p.nu / (p.h() * p.h())).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_params() {
        assert!(build_flow_model(&FlowModelParams { n: 1, l: 1.0, nu: 0.1 }).is_err());
        assert!(build_flow_model(&FlowModelParams { n: 4, l: 1.0, nu: 0.0 }).is_err());
    }

    fn kron_vec(x: &[f64], y: &[f64]) -> Vec<f64> {
        x.iter().flat_map(|a| y.iter().map(move |b| a * b)).collect()
    }

    #[test]
    fn carleman_lift_matches_row_wise_discretization() {
        let p = FlowModelParams { n: 5, l: 1.3, nu: 0.07 };
        let s = build_flow_model(&p).unwrap();
        let n = p.n;
        let w: Vec<f64> = (0..n).map(|i| 0.3 * (i as f64 + 0.7).sin()).collect();
        let minus: Vec<f64> = w.iter().map(|x| -x).collect();
        let (f, g) = flow_rhs(&p, &w);
        let (fm, gm) = flow_rhs(&p, &minus);
        // f is quadratic: its odd part is the linear drift
        let lin: Vec<f64> = f.iter().zip(&fm).map(|(a, b)| 0.5 * (a - b)).collect();
        let g0: Vec<f64> = g.iter().zip(&gm).map(|(a, b)| 0.5 * (a + b)).collect();

        let mut x = w.clone();
        x.extend(kron_vec(&w, &w));
        let mut ax = vec![0.0; x.len()];
        s.a().apply_add(1.0, &x, &mut ax);
        let mut nx = vec![0.0; x.len()];
        s.ns()[0].apply_add(1.0, &x, &mut nx);

        for i in 0..n {
            assert!((ax[i] - f[i]).abs() < 1e-12 * (1.0 + f[i].abs()), "drift row {i}");
            assert!((nx[i] + s.b().get(i, 0) - g[i]).abs() < 1e-12 * (1.0 + g[i].abs()), "input row {i}");
        }
        let quad: Vec<f64> = kron_vec(&lin, &w).iter().zip(kron_vec(&w, &lin)).map(|(a, b)| a + b).collect();
        let quad_in: Vec<f64> = kron_vec(&g0, &w).iter().zip(kron_vec(&w, &g0)).map(|(a, b)| a + b).collect();
        for k in 0..n * n {
            assert!((ax[n + k] - quad[k]).abs() < 1e-10 * (1.0 + quad[k].abs()));
            assert!((nx[n + k] - quad_in[k]).abs() < 1e-10 * (1.0 + quad_in[k].abs()));
        }
    }
}
