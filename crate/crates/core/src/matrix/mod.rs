//! Dense matrices over an exact field.

mod echelon;
mod elementary;

pub use echelon::{ColumnEchelon, PivotProfile, ReversedProfile, RowEchelon};
pub use elementary::ElemOp;

use std::fmt;
use std::ops::Mul;

use thiserror::Error;

use crate::field::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("shape mismatch: {op} of {left:?} and {right:?}")]
    ShapeMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("index {index} out of range for dimension {bound}")]
    OutOfRange { index: usize, bound: usize },
    #[error("matrix is not invertible")]
    Singular,
    #[error("matrix is not square ({0}x{1})")]
    NotSquare(usize, usize),
    #[error("ragged input: row {row} has {found} entries, expected {expected}")]
    Ragged { row: usize, found: usize, expected: usize },
}

/// Row-major dense matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = S::one();
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<S>) -> Result<Self, MatrixError> {
        if data.len() != rows * cols {
            return Err(MatrixError::Ragged {
                row: 0,
                found: data.len(),
                expected: rows * cols,
            });
        }
        Ok(Matrix { rows, cols, data })
    }

    /// Builds a matrix from rows; `cols` is needed when there are no rows.
    pub fn from_rows(cols: usize, rows: Vec<Vec<S>>) -> Result<Self, MatrixError> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        let n = rows.len();
        for (row, entries) in rows.into_iter().enumerate() {
            if entries.len() != cols {
                return Err(MatrixError::Ragged {
                    row,
                    found: entries.len(),
                    expected: cols,
                });
            }
            data.extend(entries);
        }
        Ok(Matrix { rows: n, cols, data })
    }

    /// Convenience constructor from small integer literals.
    pub fn from_ints<const C: usize>(rows: &[[i64; C]]) -> Self {
        Matrix {
            rows: rows.len(),
            cols: C,
            data: rows.iter().flatten().map(|&v| S::from_i64(v)).collect(),
        }
    }

    /// The elementary matrix e_{p,q}(λ) = I + λ·E_{pq}; `p != q` is required.
    pub fn elementary(n: usize, p: usize, q: usize, lambda: S) -> Result<Self, MatrixError> {
        for index in [p, q] {
            if index >= n {
                return Err(MatrixError::OutOfRange { index, bound: n });
            }
        }
        assert_ne!(p, q, "elementary matrix needs distinct indices");
        let mut m = Self::identity(n);
        m.data[p * n + q] = lambda;
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &S {
        assert!(r < self.rows && c < self.cols, "({r},{c}) outside {}x{}", self.rows, self.cols);
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: S) {
        assert!(r < self.rows && c < self.cols, "({r},{c}) outside {}x{}", self.rows, self.cols);
        self.data[r * self.cols + c] = value;
    }

    pub fn row(&self, r: usize) -> &[S] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(S::is_zero)
    }

    pub fn row_is_zero(&self, r: usize) -> bool {
        self.row(r).iter().all(S::is_zero)
    }

    pub fn col_is_zero(&self, c: usize) -> bool {
        (0..self.rows).all(|r| self.get(r, c).is_zero())
    }

    /// Column of the first nonzero entry in row `r`.
    pub fn row_pivot(&self, r: usize) -> Option<usize> {
        self.row(r).iter().position(|x| !x.is_zero())
    }

    pub fn nonzero_count(&self) -> usize {
        self.data.iter().filter(|x| !x.is_zero()).count()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c).clone();
            }
        }
        t
    }

    /// Transpose across the anti-diagonal: `J·Mᵀ·J` with `J` the exchange matrix.
    pub fn anti_transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(self.cols - 1 - c, self.rows - 1 - r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self, MatrixError> {
        if self.cols != rhs.rows {
            return Err(MatrixError::ShapeMismatch {
                op: "product",
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[r * self.cols + k];
                if a.is_zero() {
                    continue;
                }
                for c in 0..rhs.cols {
                    let b = &rhs.data[k * rhs.cols + c];
                    if !b.is_zero() {
                        let slot = &mut out.data[r * rhs.cols + c];
                        *slot = slot.clone() + a.clone() * b.clone();
                    }
                }
            }
        }
        Ok(out)
    }

    /// Returns a copy with Row(p) += λ·Row(q), i.e. `e_{p,q}(λ)·M`.
    pub fn row_op(&self, p: usize, q: usize, lambda: S) -> Result<Self, MatrixError> {
        self.check_index(p, self.rows)?;
        self.check_index(q, self.rows)?;
        let mut m = self.clone();
        m.add_row_multiple(p, q, &lambda);
        Ok(m)
    }

    /// Returns a copy with Col(q) += λ·Col(p), i.e. `M·e_{p,q}(λ)`.
    pub fn col_op(&self, q: usize, p: usize, lambda: S) -> Result<Self, MatrixError> {
        self.check_index(p, self.cols)?;
        self.check_index(q, self.cols)?;
        let mut m = self.clone();
        m.add_col_multiple(q, p, &lambda);
        Ok(m)
    }

    fn check_index(&self, index: usize, bound: usize) -> Result<(), MatrixError> {
        if index >= bound {
            Err(MatrixError::OutOfRange { index, bound })
        } else {
            Ok(())
        }
    }

    /// Row(target) += λ·Row(source).
    pub fn add_row_multiple(&mut self, target: usize, source: usize, lambda: &S) {
        if lambda.is_zero() {
            return;
        }
        assert_ne!(target, source);
        for c in 0..self.cols {
            let s = &self.data[source * self.cols + c];
            if !s.is_zero() {
                let delta = lambda.clone() * s.clone();
                let t = &mut self.data[target * self.cols + c];
                *t = t.clone() + delta;
            }
        }
    }

    /// Col(target) += λ·Col(source).
    pub fn add_col_multiple(&mut self, target: usize, source: usize, lambda: &S) {
        if lambda.is_zero() {
            return;
        }
        assert_ne!(target, source);
        for r in 0..self.rows {
            let s = &self.data[r * self.cols + source];
            if !s.is_zero() {
                let delta = lambda.clone() * s.clone();
                let t = &mut self.data[r * self.cols + target];
                *t = t.clone() + delta;
            }
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.data.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for r in 0..self.rows {
                self.data.swap(r * self.cols + a, r * self.cols + b);
            }
        }
    }

    pub fn scale_row(&mut self, r: usize, lambda: &S) {
        for x in &mut self.data[r * self.cols..(r + 1) * self.cols] {
            *x = x.clone() * lambda.clone();
        }
    }

    pub fn scale_col(&mut self, c: usize, lambda: &S) {
        for r in 0..self.rows {
            let x = &mut self.data[r * self.cols + c];
            *x = x.clone() * lambda.clone();
        }
    }

    /// Copies the rectangular block with the given row and column indices.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut m = Self::zeros(rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                m.set(i, j, self.get(r, c).clone());
            }
        }
        m
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    pub fn inverse(&self) -> Result<Self, MatrixError> {
        if !self.is_square() {
            return Err(MatrixError::NotSquare(self.rows, self.cols));
        }
        let echelon = self.rref();
        if echelon.pivots.len() != self.rows {
            return Err(MatrixError::Singular);
        }
        Ok(echelon.transform)
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &Self) -> Result<Self, MatrixError> {
        if self.rows != other.rows {
            return Err(MatrixError::ShapeMismatch {
                op: "hstack",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let mut m = Self::zeros(self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m.set(r, c, self.get(r, c).clone());
            }
            for c in 0..other.cols {
                m.set(r, self.cols + c, other.get(r, c).clone());
            }
        }
        Ok(m)
    }
}

impl<S: Scalar> Mul for &Matrix<S> {
    type Output = Matrix<S>;

    /// Panics on a shape mismatch; use [`Matrix::try_mul`] to handle it.
    fn mul(self, rhs: &Matrix<S>) -> Matrix<S> {
        self.try_mul(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl<S: fmt::Debug> fmt::Debug for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for (r, row) in self.data.chunks(self.cols.max(1)).take(self.rows).enumerate() {
            if r > 0 {
                write!(f, ";")?;
            }
            for x in row {
                write!(f, " {x:?}")?;
            }
        }
        write!(f, " ]")
    }
}

impl<S: fmt::Display> fmt::Display for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row = &self.data[r * self.cols..(r + 1) * self.cols];
            let line: Vec<String> = row.iter().map(ToString::to_string).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}
