//! Small dense matrices and the elimination routines built on them.

use std::ops::{Index, IndexMut};

use crate::error::MatrixError;
use crate::scalar::Scalar;

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self, MatrixError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(MatrixError::Ragged);
        }
        Ok(Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
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

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.cols, "dimension mismatch in mul_vec");
        (0..self.rows)
            .map(|i| crate::scalar::dot(self.row(i), v))
            .collect()
    }

    /// `vᵀ M`
    pub fn left_mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.rows, "dimension mismatch in left_mul_vec");
        (0..self.cols)
            .map(|j| {
                (0..self.rows).fold(T::zero(), |acc, i| {
                    acc + v[i].clone() * self[(i, j)].clone()
                })
            })
            .collect()
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> T {
        (0..self.rows)
            .map(|i| self.row(i).iter().fold(T::zero(), |acc, x| acc + x.abs()))
            .fold(T::zero(), |acc, s| if s > acc { s } else { acc })
    }

    /// The submatrix with the listed rows and columns, in the given order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| {
            self[(rows[i], cols[j])].clone()
        })
    }

    /// `P M Pᵀ` where row `k` of the result is row `order[k]` of `self`.
    pub fn permuted(&self, order: &[usize]) -> Self {
        self.select(order, order)
    }

    /// Deletes row `i` and column `j`.
    pub fn minor(&self, i: usize, j: usize) -> Self {
        let rows: Vec<usize> = (0..self.rows).filter(|&r| r != i).collect();
        let cols: Vec<usize> = (0..self.cols).filter(|&c| c != j).collect();
        self.select(&rows, &cols)
    }

    pub fn with_column(&self, j: usize, column: &[T]) -> Self {
        assert_eq!(column.len(), self.rows);
        let mut m = self.clone();
        for (i, v) in column.iter().enumerate() {
            m[(i, j)] = v.clone();
        }
        m
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;

    fn index(&self, (i, j): (usize, usize)) -> &T {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

/// Determinant by row elimination with partial pivoting.
///
/// The empty matrix has determinant one.
pub fn determinant<T: Scalar>(m: &Matrix<T>) -> Result<T, MatrixError> {
    if !m.is_square() {
        return Err(MatrixError::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let n = m.rows;
    let mut a = m.clone();
    let mut det = T::one();
    for k in 0..n {
        let pivot = argmax_abs(&a, k, k);
        if a[(pivot, k)].is_zero() {
            return Ok(T::zero());
        }
        if pivot != k {
            swap_rows(&mut a, pivot, k);
            det = -det;
        }
        let p = a[(k, k)].clone();
        for i in k + 1..n {
            if a[(i, k)].is_zero() {
                continue;
            }
            let factor = a[(i, k)].clone() / p.clone();
            for j in k + 1..n {
                let v = a[(k, j)].clone() * factor.clone();
                a[(i, j)] = a[(i, j)].clone() - v;
            }
            a[(i, k)] = T::zero();
        }
        det = det * p;
    }
    Ok(det)
}

/// Reduced row-echelon form. Entries whose magnitude does not exceed
/// `threshold` are never chosen as pivots. Returns the reduced matrix and
/// the pivot column of each pivot row.
fn row_reduce<T: Scalar>(m: &Matrix<T>, threshold: &T) -> (Matrix<T>, Vec<usize>) {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..a.cols {
        if r == a.rows {
            break;
        }
        let p = argmax_abs(&a, r, c);
        if a[(p, c)].abs() <= threshold.clone() || a[(p, c)].is_zero() {
            continue;
        }
        swap_rows(&mut a, p, r);
        let pv = a[(r, c)].clone();
        for j in 0..a.cols {
            a[(r, j)] = a[(r, j)].clone() / pv.clone();
        }
        for i in 0..a.rows {
            if i == r || a[(i, c)].is_zero() {
                continue;
            }
            let factor = a[(i, c)].clone();
            for j in 0..a.cols {
                let v = a[(r, j)].clone() * factor.clone();
                a[(i, j)] = a[(i, j)].clone() - v;
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

fn pivot_threshold<T: Scalar>(m: &Matrix<T>, tol: &T) -> T {
    tol.clone() * m.norm_inf() * T::from_count(m.rows.max(m.cols))
}

/// Numerical rank with pivot threshold `tol · ‖M‖∞ · n`.
pub fn rank<T: Scalar>(m: &Matrix<T>, tol: &T) -> usize {
    let threshold = pivot_threshold(m, tol);
    row_reduce(m, &threshold).1.len()
}

/// Basis of the null space of `m` computed by elimination, independent of
/// any graph structure. Each basis vector has a one in its free coordinate.
pub fn nullspace_oracle<T: Scalar>(m: &Matrix<T>, tol: &T) -> Vec<Vec<T>> {
    let threshold = pivot_threshold(m, tol);
    let (rref, pivots) = row_reduce(m, &threshold);
    let free: Vec<usize> = (0..m.cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![T::zero(); m.cols];
            v[f] = T::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -rref[(r, f)].clone();
            }
            v
        })
        .collect()
}

/// Least-squares residual of `v` against the span of `basis`, relative to
/// `‖v‖∞`. Used to check that a constructed vector lies in an oracle null
/// space.
pub fn span_residual(basis: &[Vec<f64>], v: &[f64]) -> f64 {
    let k = basis.len();
    let scale = v.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    if scale == 0.0 {
        return 0.0;
    }
    if k == 0 {
        return 1.0;
    }
    // normal equations G c = Bᵀ v
    let gram = Matrix::from_fn(k, k, |i, j| crate::scalar::dot(&basis[i], &basis[j]));
    let rhs: Vec<f64> = basis.iter().map(|b| crate::scalar::dot(b, v)).collect();
    let coeffs = solve(&gram, &rhs).unwrap_or_else(|| vec![0.0; k]);
    let fitted: Vec<f64> = (0..v.len())
        .map(|i| (0..k).map(|j| coeffs[j] * basis[j][i]).sum())
        .collect();
    fitted
        .iter()
        .zip(v)
        .fold(0.0f64, |a, (f, x)| a.max((f - x).abs()))
        / scale
}

/// Gaussian elimination solve; `None` when singular.
pub fn solve<T: Scalar>(m: &Matrix<T>, rhs: &[T]) -> Option<Vec<T>> {
    let n = m.rows;
    let mut aug = Matrix::from_fn(n, n + 1, |i, j| {
        if j < n {
            m[(i, j)].clone()
        } else {
            rhs[i].clone()
        }
    });
    for k in 0..n {
        let p = argmax_abs(&aug, k, k);
        if aug[(p, k)].is_zero() {
            return None;
        }
        swap_rows(&mut aug, p, k);
        for i in k + 1..n {
            let factor = aug[(i, k)].clone() / aug[(k, k)].clone();
            for j in k..=n {
                let v = aug[(k, j)].clone() * factor.clone();
                aug[(i, j)] = aug[(i, j)].clone() - v;
            }
        }
    }
    let mut x = vec![T::zero(); n];
    for i in (0..n).rev() {
        let mut s = aug[(i, n)].clone();
        for j in i + 1..n {
            s = s - aug[(i, j)].clone() * x[j].clone();
        }
        x[i] = s / aug[(i, i)].clone();
    }
    Some(x)
}

fn argmax_abs<T: Scalar>(a: &Matrix<T>, from_row: usize, col: usize) -> usize {
    let mut best = from_row;
    for i in from_row + 1..a.rows {
        if a[(i, col)].abs() > a[(best, col)].abs() {
            best = i;
        }
    }
    best
}

fn swap_rows<T>(a: &mut Matrix<T>, i: usize, j: usize) {
    if i == j {
        return;
    }
    for c in 0..a.cols {
        a.data.swap(i * a.cols + c, j * a.cols + c);
    }
}
