use super::{Mat, Scalar};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Norms {
    pub two_norm: f64,
    pub frobenius_norm: f64,
}

pub fn frobenius<T: Scalar>(m: &Mat<T>) -> f64 {
    let mut s = 0.0;
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            s += m[(i, j)].abs_sq();
        }
    }
    s.sqrt()
}

/// Largest singular value from a dense SVD.
pub fn spectral_norm<T: Scalar>(m: &Mat<T>) -> f64 {
    super::svd_values(m).ok().and_then(|s| s.first().copied()).unwrap_or(0.0)
}

pub fn norms<T: Scalar>(m: &Mat<T>) -> Norms {
    Norms { two_norm: spectral_norm(m), frobenius_norm: frobenius(m) }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_three_four() {
        let m = Mat::from_fn(2, 2, |i, j| if i == j { [3.0, 4.0][i] } else { 0.0 });
        let n = norms(&m);
        assert!((n.two_norm - 4.0).abs() < 1e-14);
        assert!((n.frobenius_norm - 5.0).abs() < 1e-14);
    }

    #[test]
    fn zero_matrix() {
        let n = norms(&Mat::<f64>::zeros(3, 3));
        assert_eq!(n, Norms { two_norm: 0.0, frobenius_norm: 0.0 });
    }
}
