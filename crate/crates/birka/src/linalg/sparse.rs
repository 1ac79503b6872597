use super::{Mat, Scalar};
use crate::error::{dim_err, Result};
use crate::Error;
use faer::linalg::solvers::Solve;
use faer::sparse::linalg::solvers::Lu;
use faer::sparse::{SparseColMat, Triplet};
use std::ops::Mul;

/// Compressed-row sparse matrix with unique coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix<T = f64> {
    rows: usize,
    cols: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<T>,
}

impl<T: Scalar> SparseMatrix<T> {
    /// Build from `(row, col, value)` triplets. Duplicate coordinates are rejected.
    pub fn try_from_triplets(rows: usize, cols: usize, trips: &[(usize, usize, T)]) -> Result<Self> {
        Self::build(rows, cols, trips, false)
    }

    /// Build from triplets, summing duplicates (assembly convenience).
    pub fn from_triplets_summed(rows: usize, cols: usize, trips: &[(usize, usize, T)]) -> Result<Self> {
        Self::build(rows, cols, trips, true)
    }

    fn build(rows: usize, cols: usize, trips: &[(usize, usize, T)], sum: bool) -> Result<Self> {
        let mut order: Vec<usize> = (0..trips.len()).collect();
        for &(i, j, _) in trips {
            if i >= rows || j >= cols {
                return dim_err(format!("triplet ({i}, {j}) outside {rows}x{cols}"));
            }
        }
        order.sort_by_key(|&k| (trips[k].0, trips[k].1));
        let mut indptr = vec![0usize; rows + 1];
        let mut indices = Vec::with_capacity(trips.len());
        let mut values: Vec<T> = Vec::with_capacity(trips.len());
        let mut last: Option<(usize, usize)> = None;
        for &k in &order {
            let (i, j, v) = trips[k];
            if last == Some((i, j)) {
                if !sum {
                    return Err(Error::Invalid(format!("duplicate coordinate ({i}, {j})")));
                }
                *values.last_mut().unwrap() += v;
                continue;
            }
            last = Some((i, j));
            indptr[i + 1] += 1;
            indices.push(j);
            values.push(v);
        }
        for i in 0..rows {
            indptr[i + 1] += indptr[i];
        }
        Ok(Self { rows, cols, indptr, indices, values })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, indptr: vec![0; rows + 1], indices: Vec::new(), values: Vec::new() }
    }

    pub fn identity(n: usize) -> Self {
        Self { rows: n, cols: n, indptr: (0..=n).collect(), indices: (0..n).collect(), values: vec![T::one(); n] }
    }

    /// Structural nonzeros are the entries that are exactly nonzero.
    pub fn from_dense(m: &Mat<T>) -> Self {
        let mut trips = Vec::new();
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                if m[(i, j)] != T::zero() {
                    trips.push((i, j, m[(i, j)]));
                }
            }
        }
        Self::build(m.nrows(), m.ncols(), &trips, false).expect("dense entries are unique")
    }

    pub fn to_dense(&self) -> Mat<T> {
        let mut m = Mat::zeros(self.rows, self.cols);
        for (i, j, v) in self.iter() {
            m[(i, j)] = v;
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, T)> + '_ {
        (0..self.rows).flat_map(move |i| (self.indptr[i]..self.indptr[i + 1]).map(move |k| (i, self.indices[k], self.values[k])))
    }

    pub fn triplets(&self) -> Vec<(usize, usize, T)> {
        self.iter().collect()
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        let row = &self.indices[self.indptr[i]..self.indptr[i + 1]];
        match row.binary_search(&j) {
            Ok(k) => self.values[self.indptr[i] + k],
            Err(_) => T::zero(),
        }
    }

    /// `(col, value)` pairs of row `i`.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, T)> + '_ {
        (self.indptr[i]..self.indptr[i + 1]).map(move |k| (self.indices[k], self.values[k]))
    }

    pub fn frobenius(&self) -> f64 {
        self.values.iter().map(|v| v.abs_sq()).sum::<f64>().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.finite())
    }

    pub fn transpose(&self) -> Self {
        let trips: Vec<_> = self.iter().map(|(i, j, v)| (j, i, v)).collect();
        Self::build(self.cols, self.rows, &trips, false).expect("transpose keeps coordinates unique")
    }

    pub fn scale(&self, s: T) -> Self {
        let mut out = self.clone();
        out.values.iter_mut().for_each(|v| *v = *v * s);
        out
    }

    /// `self + s * other`
    pub fn add_scaled(&self, s: T, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return dim_err(format!("add {}x{} and {}x{}", self.rows, self.cols, other.rows, other.cols));
        }
        let mut trips = self.triplets();
        trips.extend(other.iter().map(|(i, j, v)| (i, j, v * s)));
        Self::from_triplets_summed(self.rows, self.cols, &trips)
    }

    pub fn kron(&self, other: &Self) -> Self {
        let (s, t) = (other.rows, other.cols);
        let mut trips = Vec::with_capacity(self.nnz() * other.nnz());
        for (i, j, a) in self.iter() {
            for (k, l, b) in other.iter() {
                trips.push((i * s + k, j * t + l, a * b));
            }
        }
        Self::build(self.rows * s, self.cols * t, &trips, false).expect("kron coordinates are unique")
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(T) -> U) -> SparseMatrix<U> {
        SparseMatrix {
            rows: self.rows,
            cols: self.cols,
            indptr: self.indptr.clone(),
            indices: self.indices.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    /// `y += alpha * M x`
    pub fn apply_add<U>(&self, alpha: U, x: &[U], y: &mut [U])
    where
        U: Scalar + Mul<T, Output = U>,
    {
        debug_assert_eq!(x.len(), self.cols);
        debug_assert_eq!(y.len(), self.rows);
        for i in 0..self.rows {
            let mut s = U::zero();
            for k in self.indptr[i]..self.indptr[i + 1] {
                s += x[self.indices[k]] * self.values[k];
            }
            y[i] += alpha * s;
        }
    }

    /// `y += alpha * M^T x` (no conjugation).
    pub fn apply_t_add<U>(&self, alpha: U, x: &[U], y: &mut [U])
    where
        U: Scalar + Mul<T, Output = U>,
    {
        debug_assert_eq!(x.len(), self.rows);
        debug_assert_eq!(y.len(), self.cols);
        for i in 0..self.rows {
            let xi = alpha * x[i];
            for k in self.indptr[i]..self.indptr[i + 1] {
                y[self.indices[k]] += xi * self.values[k];
            }
        }
    }

    pub fn mul_vec<U>(&self, x: &[U]) -> Vec<U>
    where
        U: Scalar + Mul<T, Output = U>,
    {
        let mut y = vec![U::zero(); self.rows];
        self.apply_add(U::one(), x, &mut y);
        y
    }

    pub fn mul_t_vec<U>(&self, x: &[U]) -> Vec<U>
    where
        U: Scalar + Mul<T, Output = U>,
    {
        let mut y = vec![U::zero(); self.cols];
        self.apply_t_add(U::one(), x, &mut y);
        y
    }

    /// Sparse times dense.
    pub fn mul_dense<U>(&self, x: &Mat<U>) -> Mat<U>
    where
        U: Scalar + Mul<T, Output = U>,
    {
        let mut out = Mat::zeros(self.rows, x.ncols());
        for j in 0..x.ncols() {
            let col: Vec<U> = (0..x.nrows()).map(|i| x[(i, j)]).collect();
            let y = self.mul_vec(&col);
            for i in 0..self.rows {
                out[(i, j)] = y[i];
            }
        }
        out
    }

    /// Sparse transpose times dense.
    pub fn mul_t_dense<U>(&self, x: &Mat<U>) -> Mat<U>
    where
        U: Scalar + Mul<T, Output = U>,
    {
        let mut out = Mat::zeros(self.cols, x.ncols());
        for j in 0..x.ncols() {
            let col: Vec<U> = (0..x.nrows()).map(|i| x[(i, j)]).collect();
            let y = self.mul_t_vec(&col);
            for i in 0..self.cols {
                out[(i, j)] = y[i];
            }
        }
        out
    }

    fn to_faer(&self) -> Result<SparseColMat<usize, T>> {
        let trips: Vec<_> = self.iter().map(|(i, j, v)| Triplet::new(i, j, v)).collect();
        SparseColMat::try_new_from_triplets(self.rows, self.cols, &trips)
            .map_err(|e| Error::Invalid(format!("sparse conversion: {e:?}")))
    }
}

impl SparseMatrix<f64> {
    pub fn to_complex(&self) -> SparseMatrix<super::c64> {
        self.map(|v| super::c64::new(v, 0.0))
    }
}

/// Sparse LU factorization with a numerical-singularity screen.
///
/// The factorization backend does not expose pivots, so singularity is judged by
/// a short inverse power iteration: if the estimated smallest singular value falls
/// below `1e-13 * ||M||_F` (or the solve produces non-finite values) the matrix is
/// declared singular.
pub struct SparseLu<T: Scalar> {
    n: usize,
    lu: Lu<usize, T>,
    pub norm_f: f64,
    pub sigma_min_estimate: f64,
}

pub const SINGULAR_PIVOT_RATIO: f64 = 1e-13;

impl<T: Scalar> SparseLu<T> {
    pub fn new(m: &SparseMatrix<T>) -> Result<Self> {
        if m.rows != m.cols {
            return dim_err(format!("LU of non-square {}x{}", m.rows, m.cols));
        }
        let n = m.rows;
        let norm_f = m.frobenius();
        if n == 0 {
            return Err(Error::Invalid("LU of empty matrix".into()));
        }
        if norm_f == 0.0 || !norm_f.is_finite() {
            return Err(Error::Singular(format!("matrix norm is {norm_f}")));
        }
        let lu = m
            .to_faer()?
            .sp_lu()
            .map_err(|e| Error::Singular(format!("sparse LU failed: {e:?}")))?;
        let mut this = Self { n, lu, norm_f, sigma_min_estimate: f64::NAN };
        this.sigma_min_estimate = this.screen()?;
        if !(this.sigma_min_estimate > SINGULAR_PIVOT_RATIO * norm_f) {
            return Err(Error::Singular(format!(
                "estimated sigma_min {:.3e} below {:.0e} * ||M||_F = {:.3e}",
                this.sigma_min_estimate,
                SINGULAR_PIVOT_RATIO,
                SINGULAR_PIVOT_RATIO * norm_f
            )));
        }
        Ok(this)
    }

    fn screen(&self) -> Result<f64> {
        let mut x: Vec<T> = (0..self.n).map(|i| T::from_real(1.0 + ((i * 7919) % 13) as f64 / 13.0)).collect();
        let mut est = f64::INFINITY;
        for _ in 0..3 {
            let nx = super::vecops::norm2(&x);
            let y = self.solve_transpose(&self.solve(&x));
            let ny = super::vecops::norm2(&y);
            if !ny.is_finite() || y.iter().any(|v| !v.finite()) {
                return Ok(0.0);
            }
            if ny == 0.0 {
                return Ok(f64::INFINITY);
            }
            est = est.min((nx / ny).sqrt());
            x = y.iter().map(|&v| v * (1.0 / ny)).collect();
        }
        Ok(est)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn solve(&self, b: &[T]) -> Vec<T> {
        let rhs = Mat::from_fn(self.n, 1, |i, _| b[i]);
        let x = self.lu.solve(&rhs);
        (0..self.n).map(|i| x[(i, 0)]).collect()
    }

    /// Solve `M^T x = b` (no conjugation).
    pub fn solve_transpose(&self, b: &[T]) -> Vec<T> {
        let rhs = Mat::from_fn(self.n, 1, |i, _| b[i]);
        let x = self.lu.solve_transpose(&rhs);
        (0..self.n).map(|i| x[(i, 0)]).collect()
    }

    pub fn solve_mat(&self, b: &Mat<T>) -> Mat<T> {
        self.lu.solve(b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicates_rejected_or_summed() {
        let t = [(0, 0, 1.0), (0, 0, 2.0)];
        assert!(SparseMatrix::try_from_triplets(1, 1, &t).is_err());
        assert_eq!(SparseMatrix::from_triplets_summed(1, 1, &t).unwrap().get(0, 0), 3.0);
    }

    #[test]
    fn out_of_range_rejected() {
        assert!(SparseMatrix::try_from_triplets(2, 2, &[(2, 0, 1.0)]).is_err());
    }

    #[test]
    fn identity_solve() {
        let lu = SparseLu::new(&SparseMatrix::<f64>::identity(4)).unwrap();
        assert_eq!(lu.solve(&[1.0, 2.0, 3.0, 4.0]), vec![1.0, 2.0, 3.0, 4.0]);
    }

    #[test]
    fn diagonal_solve() {
        let m = SparseMatrix::try_from_triplets(2, 2, &[(0, 0, 2.0), (1, 1, 4.0)]).unwrap();
        let x = SparseLu::new(&m).unwrap().solve(&[2.0, 8.0]);
        assert!((x[0] - 1.0).abs() < 1e-15 && (x[1] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn singular_detected() {
        let m = SparseMatrix::try_from_triplets(2, 2, &[(0, 0, 1.0), (0, 1, 1.0), (1, 0, 1.0), (1, 1, 1.0)]).unwrap();
        assert!(matches!(SparseLu::new(&m), Err(Error::Singular(_))));
        let m = SparseMatrix::try_from_triplets(2, 2, &[(0, 0, 1.0)]).unwrap();
        assert!(matches!(SparseLu::new(&m), Err(Error::Singular(_))));
    }

    #[test]
    fn transpose_apply_matches() {
        let m = SparseMatrix::try_from_triplets(2, 3, &[(0, 1, 2.0), (1, 2, -1.0), (1, 0, 5.0)]).unwrap();
        let x = [1.0, 2.0];
        assert_eq!(m.mul_t_vec(&x), m.transpose().mul_vec(&x));
    }
}
