use crate::error::{dim_err, Result};
use crate::linalg::{c64, Mat, Scalar, SparseMatrix};
use crate::BilinearSystem;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    Primal,
    Dual,
}

/// `M = -Lambda (x) I_n - I_r (x) A - sum_k Ncc_k^T (x) N_k` acting on `vec(X)`, `X` n x r.
///
/// Primal: `X -> -X Lambda - A X - sum_k N_k X Ncc_k`.
/// Dual (plain transpose, no conjugation): `X -> -X Lambda - A^T X - sum_k N_k^T X Ncc_k^T`.
#[derive(Debug, Clone)]
pub struct KroneckerOperator<'a> {
    lambda: Vec<c64>,
    a: &'a SparseMatrix,
    ncc: Vec<Mat<c64>>,
    ns: &'a [SparseMatrix],
    orientation: Orientation,
    /// Shifts with nonnegative real part (the reduced drift is not Hurwitz).
    pub unstable_shifts: usize,
}

pub fn build_operator<'a>(lambda: &[c64], ncc: &[Mat<c64>], sys: &'a BilinearSystem) -> Result<KroneckerOperator<'a>> {
    let r = lambda.len();
    if r == 0 {
        return dim_err("empty shift list");
    }
    if ncc.len() != sys.m() {
        return dim_err(format!("{} reduced bilinear matrices for {} inputs", ncc.len(), sys.m()));
    }
    for (k, m) in ncc.iter().enumerate() {
        if m.nrows() != r || m.ncols() != r {
            return dim_err(format!("Ncc{} is {}x{}, expected {r}x{r}", k + 1, m.nrows(), m.ncols()));
        }
    }
    Ok(KroneckerOperator {
        lambda: lambda.to_vec(),
        a: sys.a(),
        ncc: ncc.to_vec(),
        ns: sys.ns(),
        orientation: Orientation::Primal,
        unstable_shifts: lambda.iter().filter(|l| l.re >= 0.0).count(),
    })
}

impl<'a> KroneckerOperator<'a> {
    pub fn n(&self) -> usize {
        self.a.nrows()
    }

    pub fn r(&self) -> usize {
        self.lambda.len()
    }

    pub fn dim(&self) -> usize {
        self.n() * self.r()
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn lambda(&self) -> &[c64] {
        &self.lambda
    }

    /// The same operator with the other orientation.
    pub fn transposed(&self) -> Self {
        let mut t = self.clone();
        t.orientation = match self.orientation {
            Orientation::Primal => Orientation::Dual,
            Orientation::Dual => Orientation::Primal,
        };
        t
    }

    pub fn apply(&self, x: &[c64]) -> Vec<c64> {
        self.apply_oriented(x, self.orientation)
    }

    /// Apply the transpose of this operator.
    pub fn apply_transpose(&self, x: &[c64]) -> Vec<c64> {
        let other = match self.orientation {
            Orientation::Primal => Orientation::Dual,
            Orientation::Dual => Orientation::Primal,
        };
        self.apply_oriented(x, other)
    }

    fn apply_oriented(&self, x: &[c64], o: Orientation) -> Vec<c64> {
        let (n, r) = (self.n(), self.r());
        assert_eq!(x.len(), n * r, "KroneckerOperator: vector length");
        let neg = c64::new(-1.0, 0.0);
        let mut y = vec![c64::zero(); n * r];
        for j in 0..r {
            let (xj, yj) = (&x[j * n..(j + 1) * n], &mut y[j * n..(j + 1) * n]);
            let l = self.lambda[j];
            for (yi, &xi) in yj.iter_mut().zip(xj) {
                *yi = -(l * xi);
            }
            match o {
                Orientation::Primal => self.a.apply_add(neg, xj, yj),
                Orientation::Dual => self.a.apply_t_add(neg, xj, yj),
            }
        }
        let mut z = vec![c64::zero(); n];
        for (ncc, nk) in self.ncc.iter().zip(self.ns) {
            for j in 0..r {
                z.iter_mut().for_each(|v| *v = c64::zero());
                for i in 0..r {
                    let coef = match o {
                        Orientation::Primal => ncc[(i, j)],
                        Orientation::Dual => ncc[(j, i)],
                    };
                    if coef != c64::zero() {
                        for (zv, &xv) in z.iter_mut().zip(&x[i * n..(i + 1) * n]) {
                            *zv += coef * xv;
                        }
                    }
                }
                let yj = &mut y[j * n..(j + 1) * n];
                match o {
                    Orientation::Primal => nk.apply_add(neg, &z, yj),
                    Orientation::Dual => nk.apply_t_add(neg, &z, yj),
                }
            }
        }
        y
    }

    /// Sparse assembly of the operator in its current orientation.
    pub fn assemble(&self) -> SparseMatrix<c64> {
        let (n, r) = (self.n(), self.r());
        let mut t: Vec<(usize, usize, c64)> = Vec::new();
        for j in 0..r {
            for i in 0..n {
                t.push((j * n + i, j * n + i, -self.lambda[j]));
            }
            for (a, b, v) in self.a.iter() {
                t.push((j * n + a, j * n + b, c64::new(-v, 0.0)));
            }
        }
        for (ncc, nk) in self.ncc.iter().zip(self.ns) {
            for i in 0..r {
                for j in 0..r {
                    let coef = ncc[(i, j)];
                    if coef == c64::zero() {
                        continue;
                    }
                    // block (j, i) carries Ncc[i, j] N
                    for (a, b, v) in nk.iter() {
                        t.push((j * n + a, i * n + b, -(coef * v)));
                    }
                }
            }
        }
        let primal = SparseMatrix::from_triplets_summed(n * r, n * r, &t).expect("indices in range");
        match self.orientation {
            Orientation::Primal => primal,
            Orientation::Dual => primal.transpose(),
        }
    }
}
