//! Dense matrices over a [`Scalar`].
//!
//! Storage is dense row-major, but products skip zero entries on both sides:
//! generator matrices and antisymmetrizers have a handful of nonzeros per
//! row, and exact rational arithmetic makes every avoided multiply count.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Panics if the rows are ragged.
    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == n_cols), "ragged rows");
        Self {
            rows: n_rows,
            cols: n_cols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn diagonal(entries: Vec<S>) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, e) in entries.into_iter().enumerate() {
            m[(i, i)] = e;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[S] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn scale(&self, factor: &S) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x.mul_ref(factor)).collect(),
        }
    }

    /// self + factor * identity
    pub fn add_identity(&self, factor: &S) -> Self {
        assert!(self.is_square());
        let mut m = self.clone();
        for i in 0..self.rows {
            m[(i, i)].add_assign_ref(factor);
        }
        m
    }

    pub fn trace(&self) -> S {
        assert!(self.is_square());
        let mut t = S::zero();
        for i in 0..self.rows {
            t.add_assign_ref(&self[(i, i)]);
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    /// Entry of largest magnitude, if any entry is nonzero.
    pub fn max_abs_entry(&self) -> Option<&S> {
        self.data
            .iter()
            .filter(|x| !x.is_zero())
            .max_by(|a, b| a.abs_f64().total_cmp(&b.abs_f64()))
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(Scalar::abs_f64).fold(0.0, f64::max)
    }

    pub fn frobenius(&self) -> f64 {
        self.data
            .iter()
            .map(|x| {
                let v = x.to_f64();
                v * v
            })
            .sum::<f64>()
            .sqrt()
    }

    pub fn to_f64(&self) -> Matrix<f64> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(Scalar::to_f64).collect(),
        }
    }

    /// Number of nonzero entries in each column.
    pub fn column_nonzeros(&self) -> Vec<usize> {
        (0..self.cols)
            .map(|j| (0..self.rows).filter(|&i| !self[(i, j)].is_zero()).count())
            .collect()
    }

    pub fn mul_vec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = S::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() {
                        acc.add_mul_assign(a, b);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let rhs_support: Vec<Vec<usize>> = (0..rhs.rows)
            .map(|k| (0..rhs.cols).filter(|&j| !rhs[(k, j)].is_zero()).collect())
            .collect();
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for (k, a) in self.row(i).iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for &j in &rhs_support[k] {
                    out.data[i * rhs.cols + j].add_mul_assign(a, &rhs.data[k * rhs.cols + j]);
                }
            }
        }
        out
    }

    /// Kronecker product; the left factor indexes the most significant slot.
    pub fn kron(&self, rhs: &Self) -> Self {
        let mut out = Self::zeros(self.rows * rhs.rows, self.cols * rhs.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = &self[(i, j)];
                if a.is_zero() {
                    continue;
                }
                for r in 0..rhs.rows {
                    for c in 0..rhs.cols {
                        let b = &rhs[(r, c)];
                        if !b.is_zero() {
                            out[(i * rhs.rows + r, j * rhs.cols + c)] = a.mul_ref(b);
                        }
                    }
                }
            }
        }
        out
    }

    pub fn commutator(&self, rhs: &Self) -> Self {
        &self.matmul(rhs) - &rhs.matmul(self)
    }

    /// Gauss-Jordan elimination with largest-magnitude pivoting.
    /// Returns the rank, the reduced matrix and the identically transformed augment.
    fn eliminate(&self, augment: Option<&Self>) -> (usize, Vec<Vec<S>>, Option<Vec<Vec<S>>>) {
        let scale = self.max_abs().max(1.0);
        let tol = 1e-12 * scale;
        let mut a: Vec<Vec<S>> = (0..self.rows).map(|i| self.row(i).to_vec()).collect();
        let mut b: Option<Vec<Vec<S>>> = augment.map(|m| (0..m.rows).map(|i| m.row(i).to_vec()).collect());
        let mut rank = 0;
        for c in 0..self.cols {
            if rank == self.rows {
                break;
            }
            let pivot = (rank..self.rows)
                .filter(|&r| !a[r][c].is_negligible(tol))
                .max_by(|&x, &y| a[x][c].abs_f64().total_cmp(&a[y][c].abs_f64()));
            let Some(pivot) = pivot else { continue };
            a.swap(rank, pivot);
            if let Some(b) = b.as_mut() {
                b.swap(rank, pivot);
            }
            let inv = S::one() / a[rank][c].clone();
            for x in a[rank].iter_mut() {
                *x = x.mul_ref(&inv);
            }
            if let Some(b) = b.as_mut() {
                for x in b[rank].iter_mut() {
                    *x = x.mul_ref(&inv);
                }
            }
            for r in 0..self.rows {
                if r == rank || a[r][c].is_zero() {
                    continue;
                }
                let factor = a[r][c].clone();
                for j in 0..self.cols {
                    let delta = a[rank][j].mul_ref(&factor);
                    a[r][j] = a[r][j].clone() - delta;
                }
                if let Some(b) = b.as_mut() {
                    for j in 0..b[r].len() {
                        let delta = b[rank][j].mul_ref(&factor);
                        b[r][j] = b[r][j].clone() - delta;
                    }
                }
            }
            rank += 1;
        }
        (rank, a, b)
    }

    pub fn rank(&self) -> usize {
        self.eliminate(None).0
    }

    pub fn inverse(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let (rank, _, inv) = self.eliminate(Some(&Self::identity(n)));
        if rank < n {
            return None;
        }
        inv.map(Self::from_rows)
    }

    pub fn to_nalgebra(&self) -> nalgebra::DMatrix<f64> {
        nalgebra::DMatrix::from_row_iterator(self.rows, self.cols, self.data.iter().map(Scalar::to_f64))
    }
}

impl<S> Index<(usize, usize)> for Matrix<S> {
    type Output = S;

    fn index(&self, (i, j): (usize, usize)) -> &S {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<S> IndexMut<(usize, usize)> for Matrix<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<S: Scalar> Add for &Matrix<S> {
    type Output = Matrix<S>;

    fn add(self, rhs: &Matrix<S>) -> Matrix<S> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() + b.clone()).collect(),
        }
    }
}

impl<S: Scalar> Sub for &Matrix<S> {
    type Output = Matrix<S>;

    fn sub(self, rhs: &Matrix<S>) -> Matrix<S> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() - b.clone()).collect(),
        }
    }
}

impl<S: Scalar> Mul for &Matrix<S> {
    type Output = Matrix<S>;

    fn mul(self, rhs: &Matrix<S>) -> Matrix<S> {
        self.matmul(rhs)
    }
}

/// Product of a list of matrices in the written order.
pub fn product<'a, S: Scalar>(factors: impl IntoIterator<Item = &'a Matrix<S>>, n: usize) -> Matrix<S> {
    factors
        .into_iter()
        .fold(Matrix::identity(n), |acc, m| acc.matmul(m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn r(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    #[test]
    fn product_and_kron() {
        let a = Matrix::from_rows(vec![vec![r(1, 1), r(2, 1)], vec![r(0, 1), r(1, 2)]]);
        let b = Matrix::from_rows(vec![vec![r(0, 1), r(1, 1)], vec![r(1, 1), r(0, 1)]]);
        assert_eq!(&a * &b, Matrix::from_rows(vec![vec![r(2, 1), r(1, 1)], vec![r(1, 2), r(0, 1)]]));
        let k = a.kron(&b);
        assert_eq!(k.rows(), 4);
        // (a1 a2, b1 b2) = a[a1,b1] b[a2,b2]
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(k[(i, j)], a[(i / 2, j / 2)].clone() * b[(i % 2, j % 2)].clone());
            }
        }
    }

    #[test]
    fn inverse_and_rank() {
        let a = Matrix::from_rows(vec![vec![r(2, 1), r(1, 1)], vec![r(1, 1), r(1, 1)]]);
        let inv = a.inverse().unwrap();
        assert_eq!(&a * &inv, Matrix::identity(2));
        let singular = Matrix::from_rows(vec![vec![r(1, 1), r(2, 1)], vec![r(2, 1), r(4, 1)]]);
        assert!(singular.inverse().is_none());
        assert_eq!(singular.rank(), 1);

        let f = a.to_f64();
        let finv = f.inverse().unwrap();
        assert!((&(&f * &finv) - &Matrix::identity(2)).max_abs() < 1e-15);
    }

    #[test]
    fn trace_and_identity_shift() {
        let a = Matrix::diagonal(vec![r(1, 2), r(3, 1)]);
        assert_eq!(a.trace(), r(7, 2));
        assert_eq!(a.add_identity(&r(-1, 2)).trace(), r(5, 2));
    }
}
