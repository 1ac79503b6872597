use super::Mat;

/// Orthonormal basis for a column span.
#[derive(Debug, Clone)]
pub struct Orth {
    pub q: Mat<f64>,
    /// Upper-triangular `Z` with `M = Q Z`; present only when `M` has full column rank.
    pub z: Option<Mat<f64>>,
    pub rank_deficient: bool,
}

impl Orth {
    pub fn rank(&self) -> usize {
        self.q.ncols()
    }
}

/// Orthonormal basis of `span(m)`.
///
/// Full-rank input goes through Householder QR (signs fixed so `diag(Z) > 0`);
/// rank-deficient input falls back to the leading left singular vectors.
/// `rank_tol` defaults to `max(rows, cols) * eps * sigma_max`.
pub fn orth(m: &Mat<f64>, rank_tol: Option<f64>) -> Orth {
    let (n, r) = (m.nrows(), m.ncols());
    if n == 0 || r == 0 {
        return Orth { q: Mat::zeros(n, 0), z: None, rank_deficient: r > 0 };
    }
    let sv = m.singular_values().unwrap_or_default();
    let smax = sv.first().copied().unwrap_or(0.0);
    let tol = rank_tol.unwrap_or(n.max(r) as f64 * f64::EPSILON * smax);
    let rank = sv.iter().filter(|&&s| s > tol).count();
    if rank == 0 {
        return Orth { q: Mat::zeros(n, 0), z: None, rank_deficient: true };
    }
    if rank == r && n >= r {
        let qr = m.qr();
        let mut q = qr.compute_thin_Q();
        let rr = qr.R();
        let mut z = Mat::from_fn(r, r, |i, j| if i <= j { rr[(i, j)] } else { 0.0 });
        for k in 0..r {
            if z[(k, k)] < 0.0 {
                for j in 0..r {
                    z[(k, j)] = -z[(k, j)];
                }
                for i in 0..n {
                    q[(i, k)] = -q[(i, k)];
                }
            }
        }
        return Orth { q, z: Some(z), rank_deficient: false };
    }
    let svd = m.thin_svd().expect("thin SVD of a finite matrix");
    let u = svd.U();
    Orth { q: Mat::from_fn(n, rank, |i, j| u[(i, j)]), z: None, rank_deficient: rank < r }
}
