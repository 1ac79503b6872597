//! Extreme singular values of large real operators by (inverse) power iteration.

use super::{vecops, SparseLu, SparseMatrix};
use crate::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy)]
pub struct PowerOpts {
    /// Stop once the relative change of the eigenvalue estimate of `A^T A` drops below this.
    pub tol: f64,
    pub max_iter: usize,
    pub seed: u64,
}

impl Default for PowerOpts {
    fn default() -> Self {
        Self { tol: 1e-12, max_iter: 5000, seed: 0x5eed }
    }
}

/// Anything that can solve with a square matrix and its transpose.
pub trait Factored {
    fn dim(&self) -> usize;
    fn solve(&self, b: &[f64]) -> Vec<f64>;
    fn solve_transpose(&self, b: &[f64]) -> Vec<f64>;
}

impl Factored for SparseLu<f64> {
    fn dim(&self) -> usize {
        SparseLu::dim(self)
    }
    fn solve(&self, b: &[f64]) -> Vec<f64> {
        SparseLu::solve(self, b)
    }
    fn solve_transpose(&self, b: &[f64]) -> Vec<f64> {
        SparseLu::solve_transpose(self, b)
    }
}

/// `||T||_2` for a matrix-free `T: R^cols -> R^rows` given `T` and `T^T`.
pub fn power_norm(
    cols: usize,
    apply: impl Fn(&[f64]) -> Vec<f64>,
    apply_t: impl Fn(&[f64]) -> Vec<f64>,
    opts: PowerOpts,
) -> Result<f64> {
    if cols == 0 {
        return Ok(0.0);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut x: Vec<f64> = (0..cols).map(|_| rng.random::<f64>() - 0.5).collect();
    let nx = vecops::norm2(&x);
    x.iter_mut().for_each(|v| *v /= nx);
    let mut lam = 0.0f64;
    for _ in 0..opts.max_iter {
        let y = apply_t(&apply(&x));
        let next = vecops::dot(&x, &y);
        let ny = vecops::norm2(&y);
        if ny == 0.0 {
            return Ok(0.0);
        }
        if !ny.is_finite() {
            return Err(Error::NoConvergence("power iteration produced non-finite values".into()));
        }
        let done = (next - lam).abs() <= opts.tol * next.abs();
        lam = next;
        if done {
            return Ok(lam.max(0.0).sqrt());
        }
        x = y.into_iter().map(|v| v / ny).collect();
    }
    Err(Error::NoConvergence(format!("power iteration: no convergence in {} steps", opts.max_iter)))
}

pub fn largest_singular_value(m: &SparseMatrix<f64>, opts: PowerOpts) -> Result<f64> {
    power_norm(m.ncols(), |x| m.mul_vec(x), |y| m.mul_t_vec(y), opts)
}

/// `sigma_min(M) = 1 / ||M^{-1}||_2`, via power iteration on `M^{-T} M^{-1}`.
pub fn smallest_singular_value(m: &impl Factored, opts: PowerOpts) -> Result<f64> {
    let inv = power_norm(m.dim(), |x| m.solve(x), |y| m.solve_transpose(y), opts)?;
    if inv == 0.0 {
        return Err(Error::Singular("inverse norm vanished".into()));
    }
    Ok(1.0 / inv)
}
