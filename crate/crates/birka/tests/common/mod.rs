#![allow(dead_code)]

use birka::linalg::{inverse, spectral_norm, Mat};
use birka::BilinearSystem;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Mat<f64> {
    Mat::from_fn(rows, cols, |_, _| rng.sample::<f64, _>(StandardNormal))
}

/// Random system with `A + A^T <= -2 mu I` and `sum ||N_k||^2 = mu / 2`, hence
/// `A (x) I + I (x) A + sum N_k (x) N_k` is comfortably stable.
pub fn random_stable_system(seed: u64, n: usize, m: usize, p: usize) -> BilinearSystem {
    let mut g = rng(seed);
    let mu = 1.0;
    let s = gaussian(&mut g, n, n) * (1.0 / (n as f64).sqrt());
    let sym = (&s + s.transpose()) * 0.5;
    let top = spectral_norm(&sym);
    let a = Mat::from_fn(n, n, |i, j| s[(i, j)] - if i == j { top + mu } else { 0.0 });
    let ns: Vec<Mat<f64>> = (0..m)
        .map(|_| {
            let nk = gaussian(&mut g, n, n);
            let scale = (0.5 * mu / m as f64).sqrt() / spectral_norm(&nk);
            nk * scale
        })
        .collect();
    let b = gaussian(&mut g, n, m);
    let c = gaussian(&mut g, p, n);
    BilinearSystem::from_dense(&a, &ns, &b, &c).unwrap()
}

/// `(I - W (W^T W)^{-1} W^T) X`; its columns are annihilated by `W^T`.
pub fn annihilated_by(w: &Mat<f64>, x: &Mat<f64>) -> Mat<f64> {
    let gram = inverse(&(w.transpose() * w), "W^T W").unwrap();
    x - w * (&gram * (w.transpose() * x))
}

/// Bases and residuals that satisfy `W^T R_B = 0` and `R_C^T V = 0` by construction.
pub struct PgInstance {
    pub v: Mat<f64>,
    pub w: Mat<f64>,
    pub r_b: Mat<f64>,
    pub r_c: Mat<f64>,
}

pub fn pg_exact_instance(seed: u64, n: usize, r: usize, residual_scale: f64) -> PgInstance {
    let mut g = rng(seed);
    let v = gaussian(&mut g, n, r);
    let w = &v + gaussian(&mut g, n, r) * 0.5;
    let r_b = annihilated_by(&w, &gaussian(&mut g, n, r)) * residual_scale;
    let r_c = annihilated_by(&v, &gaussian(&mut g, n, r)) * residual_scale;
    PgInstance { v, w, r_b, r_c }
}

pub fn max_abs(m: &Mat<f64>) -> f64 {
    (0..m.nrows()).flat_map(|i| (0..m.ncols()).map(move |j| (i, j))).map(|(i, j)| m[(i, j)].abs()).fold(0.0, f64::max)
}

pub fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let k = v.len();
    if k % 2 == 1 {
        v[k / 2]
    } else {
        0.5 * (v[k / 2 - 1] + v[k / 2])
    }
}
