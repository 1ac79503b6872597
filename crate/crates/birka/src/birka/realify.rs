use crate::linalg::{c64, Mat};
use crate::{Error, Result};

const PAIR_TOL: f64 = 1e-8;

/// Real basis for the span of `m` and its conjugate.
///
/// Column `j` belongs to eigenvalue `lambda[j]`. A real eigenvalue passes
/// `Re m_j` through; a conjugate pair `(j, k)` contributes `Re m_j, Im m_j` and
/// drops column `k`. The output keeps the column count.
pub fn realify(m: &Mat<c64>, lambda: &[c64]) -> Result<Mat<f64>> {
    let q = m.ncols();
    if lambda.len() != q {
        return Err(Error::Dimension(format!("{} eigenvalues for {q} columns", lambda.len())));
    }
    let scale = lambda.iter().map(|l| l.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let mut cols: Vec<(usize, bool)> = Vec::with_capacity(q);
    let mut used = vec![false; q];
    for j in 0..q {
        if used[j] {
            continue;
        }
        used[j] = true;
        if lambda[j].im == 0.0 {
            cols.push((j, false));
            continue;
        }
        let partner = (0..q)
            .filter(|&k| !used[k])
            .min_by(|&a, &b| {
                let da = (lambda[a] - lambda[j].conj()).norm();
                let db = (lambda[b] - lambda[j].conj()).norm();
                da.total_cmp(&db)
            })
            .filter(|&k| (lambda[k] - lambda[j].conj()).norm() <= PAIR_TOL * scale)
            .ok_or_else(|| Error::Invalid(format!("eigenvalue {} has no conjugate partner", lambda[j])))?;
        used[partner] = true;
        cols.push((j, false));
        cols.push((j, true));
    }
    Ok(Mat::from_fn(m.nrows(), q, |i, c| {
        let (j, imag) = cols[c];
        if imag {
            m[(i, j)].im
        } else {
            m[(i, j)].re
        }
    }))
}
