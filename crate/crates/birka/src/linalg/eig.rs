use super::{c64, frobenius, Mat};
use crate::{Error, Result};

/// Eigenvector-condition threshold above which `R` is flagged as numerically defective.
pub const DEFECTIVE_COND: f64 = 1e12;

/// `M R = R diag(values)` for a real square `M`.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub values: Vec<c64>,
    /// Right eigenvectors, unit 2-norm columns. Columns of a conjugate pair are exact conjugates.
    pub vectors: Mat<c64>,
    /// 2-norm condition number of `vectors`.
    pub cond: f64,
    pub defective: bool,
}

impl EigenDecomposition {
    /// `max_j ||M r_j - lambda_j r_j||` relative to `||M||_F`.
    pub fn reconstruction_error(&self, m: &Mat<f64>) -> f64 {
        let n = m.nrows();
        let mut worst = 0.0f64;
        for j in 0..n {
            let mut err = 0.0;
            for i in 0..n {
                let mut s = c64::new(0.0, 0.0);
                for k in 0..n {
                    s += self.vectors[(k, j)] * m[(i, k)];
                }
                err += (s - self.vectors[(i, j)] * self.values[j]).norm_sqr();
            }
            worst = worst.max(err.sqrt());
        }
        let scale = frobenius(m);
        if scale > 0.0 {
            worst / scale
        } else {
            worst
        }
    }
}

/// Eigendecomposition of a real matrix.
///
/// Backed by faer's Hessenberg plus shifted-QR solver. Output is post-processed so
/// that real eigenvalues carry real eigenvectors and complex eigenvalues come in
/// exactly conjugate pairs with exactly conjugate vectors.
pub fn eig_dense(m: &Mat<f64>) -> Result<EigenDecomposition> {
    let d = m.nrows();
    if d == 0 || m.ncols() != d {
        return Err(Error::Dimension(format!("eig_dense needs a square nonempty matrix, got {}x{}", d, m.ncols())));
    }
    if (0..d).any(|i| (0..d).any(|j| !m[(i, j)].is_finite())) {
        return Err(Error::Invalid("eig_dense: non-finite entry".into()));
    }
    let evd = m.eigen().map_err(|e| Error::NoConvergence(format!("eigen iteration: {e:?}")))?;
    let mut values: Vec<c64> = (0..d).map(|i| evd.S()[i]).collect();
    let u = evd.U();
    let mut vectors = Mat::from_fn(d, d, |i, j| u[(i, j)]);

    let scale = frobenius(m).max(f64::MIN_POSITIVE);
    let tol = 64.0 * f64::EPSILON * scale;
    let mut done = vec![false; d];
    for j in 0..d {
        if done[j] {
            continue;
        }
        done[j] = true;
        if values[j].im.abs() <= tol {
            values[j].im = 0.0;
            make_real_column(&mut vectors, j);
            continue;
        }
        let target = values[j].conj();
        let partner = (0..d)
            .filter(|&k| !done[k])
            .min_by(|&a, &b| (values[a] - target).norm().total_cmp(&(values[b] - target).norm()));
        if let Some(k) = partner {
            done[k] = true;
            values[k] = values[j].conj();
            normalize_column(&mut vectors, j);
            for i in 0..d {
                vectors[(i, k)] = vectors[(i, j)].conj();
            }
        } else {
            return Err(Error::NoConvergence("complex eigenvalue without conjugate partner".into()));
        }
    }
    for j in 0..d {
        normalize_column(&mut vectors, j);
    }
    let cond = super::cond2(&vectors)?;
    Ok(EigenDecomposition { values, vectors, cond, defective: !(cond <= DEFECTIVE_COND) })
}

fn normalize_column(v: &mut Mat<c64>, j: usize) {
    let nrm = (0..v.nrows()).map(|i| v[(i, j)].norm_sqr()).sum::<f64>().sqrt();
    if nrm > 0.0 {
        for i in 0..v.nrows() {
            v[(i, j)] /= nrm;
        }
    }
}

// Rotate by the phase of the largest entry, then drop the (roundoff) imaginary part.
fn make_real_column(v: &mut Mat<c64>, j: usize) {
    let n = v.nrows();
    let imax = (0..n).max_by(|&a, &b| v[(a, j)].norm().total_cmp(&v[(b, j)].norm())).unwrap_or(0);
    let piv = v[(imax, j)];
    let phase = if piv.norm() > 0.0 { piv.conj() / piv.norm() } else { c64::new(1.0, 0.0) };
    for i in 0..n {
        v[(i, j)] = c64::new((v[(i, j)] * phase).re, 0.0);
    }
    normalize_column(v, j);
}
