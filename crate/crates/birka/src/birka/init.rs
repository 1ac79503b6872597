use super::ReducedModel;
use crate::linalg::{eig_dense, Mat};
use crate::{Error, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// Extra draws allowed when the random drift is numerically defective.
pub const MAX_RESAMPLES: usize = 5;
const COND_LIMIT: f64 = 1e12;

/// Random reduced model with i.i.d. standard normal entries.
///
/// The drift is shifted by `-(max Re lambda + 1) I`, so every eigenvalue has real
/// part at most -1. Shifting leaves the eigenvectors alone, so a draw whose
/// eigenvector matrix is too ill-conditioned is replaced by the next one.
pub fn initialize_guess(seed: u64, r: usize, m: usize, p: usize) -> Result<ReducedModel> {
    if r == 0 || m == 0 || p == 0 {
        return Err(Error::Invalid(format!("initial guess needs r, m, p >= 1, got ({r}, {m}, {p})")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = |rows: usize, cols: usize| Mat::<f64>::from_fn(rows, cols, |_, _| StandardNormal.sample(&mut rng));
    let mut worst = 0.0f64;
    for _ in 0..=MAX_RESAMPLES {
        let mut a = draw(r, r);
        let n = (0..m).map(|_| draw(r, r)).collect::<Vec<_>>();
        let b = draw(r, m);
        let c = draw(p, r);
        let eig = eig_dense(&a)?;
        if eig.cond > COND_LIMIT || !eig.cond.is_finite() {
            worst = worst.max(eig.cond);
            continue;
        }
        let shift = eig.values.iter().map(|l| l.re).fold(f64::NEG_INFINITY, f64::max) + 1.0;
        for i in 0..r {
            a[(i, i)] -= shift;
        }
        return Ok(ReducedModel { a, n, b, c });
    }
    Err(Error::NoConvergence(format!(
        "seed {seed}: {} random drifts were all numerically defective (eigenvector condition up to {worst:.3e})",
        MAX_RESAMPLES + 1
    )))
}
