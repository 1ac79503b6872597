use super::BilinearSystem;
use crate::linalg::{Scalar, SparseMatrix};
use std::ops::Mul;

/// `G = -A (x) I - I (x) A - sum_k N_k (x) N_k`, acting on `vec(X)` for `n x n` `X`.
///
/// Matrix-free: `G vec(X) = vec(-X A^T - A X - sum_k N_k X N_k^T)`.
#[derive(Debug, Clone)]
pub struct GramianOperator<'a> {
    a: &'a SparseMatrix,
    ns: &'a [SparseMatrix],
}

impl<'a> GramianOperator<'a> {
    pub fn new(sys: &'a BilinearSystem) -> Self {
        Self { a: sys.a(), ns: sys.ns() }
    }

    pub fn order(&self) -> usize {
        self.a.nrows()
    }

    pub fn dim(&self) -> usize {
        self.order() * self.order()
    }

    pub fn apply<T: Scalar + Mul<f64, Output = T>>(&self, x: &[T]) -> Vec<T> {
        self.apply_impl(x, false)
    }

    pub fn apply_transpose<T: Scalar + Mul<f64, Output = T>>(&self, x: &[T]) -> Vec<T> {
        self.apply_impl(x, true)
    }

    fn apply_impl<T: Scalar + Mul<f64, Output = T>>(&self, x: &[T], transpose: bool) -> Vec<T> {
        let n = self.order();
        assert_eq!(x.len(), n * n, "GramianOperator: vector length");
        let mut y = vec![T::zero(); n * n];
        let neg = T::from_real(-1.0);
        // A X  (or A^T X)
        for j in 0..n {
            let (xj, yj) = (&x[j * n..(j + 1) * n], &mut y[j * n..(j + 1) * n]);
            if transpose {
                self.a.apply_t_add(neg, xj, yj);
            } else {
                self.a.apply_add(neg, xj, yj);
            }
        }
        // X A^T (or X A): column k of X A^T is sum_l A[k,l] x_l
        for (k, l, v) in self.a.iter() {
            let (src, dst) = if transpose { (k, l) } else { (l, k) };
            for i in 0..n {
                let t = x[src * n + i] * v;
                y[dst * n + i] -= t;
            }
        }
        for nk in self.ns {
            // Z = N X (or N^T X), then subtract Z N^T (or Z N)
            let mut z = vec![T::zero(); n * n];
            for j in 0..n {
                if transpose {
                    nk.apply_t_add(T::one(), &x[j * n..(j + 1) * n], &mut z[j * n..(j + 1) * n]);
                } else {
                    nk.apply_add(T::one(), &x[j * n..(j + 1) * n], &mut z[j * n..(j + 1) * n]);
                }
            }
            for (k, l, v) in nk.iter() {
                let (src, dst) = if transpose { (k, l) } else { (l, k) };
                for i in 0..n {
                    let t = z[src * n + i] * v;
                    y[dst * n + i] -= t;
                }
            }
        }
        y
    }

    /// Sparse `n^2 x n^2` assembly.
    pub fn assemble(&self) -> SparseMatrix {
        let n = self.order();
        let eye = SparseMatrix::<f64>::identity(n);
        let mut trips = Vec::new();
        for m in [self.a.kron(&eye), eye.kron(self.a)] {
            trips.extend(m.iter().map(|(i, j, v)| (i, j, -v)));
        }
        for nk in self.ns {
            trips.extend(nk.kron(nk).iter().map(|(i, j, v)| (i, j, -v)));
        }
        SparseMatrix::from_triplets_summed(n * n, n * n, &trips).expect("indices in range")
    }
}
