use crate::field::Scalar;

use super::{ElemOp, Matrix};

/// Result of Gauss–Jordan elimination: `reduced = transform · original`.
#[derive(Clone, Debug)]
pub struct RowEchelon<S> {
    pub reduced: Matrix<S>,
    pub transform: Matrix<S>,
    /// Pivot column of each nonzero row, strictly increasing.
    pub pivots: Vec<usize>,
    /// Row operations in application order; their product is `transform`.
    pub ops: Vec<ElemOp<S>>,
}

/// Result of reversed column reduction: `reduced = original · transform`.
#[derive(Clone, Debug)]
pub struct ColumnEchelon<S> {
    pub reduced: Matrix<S>,
    pub transform: Matrix<S>,
    /// Column operations in application order (each applied on the right).
    pub ops: Vec<ElemOp<S>>,
}

/// Pivot columns (0-based) of a matrix in barcode form, one per nonzero row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PivotProfile {
    pub pivot_cols: Vec<usize>,
}

/// Pivot rows (0-based) of a matrix in reversed barcode form, one per
/// nonzero column; the nonzero columns are the last `rank()` ones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReversedProfile {
    pub pivot_rows: Vec<usize>,
}

impl PivotProfile {
    pub fn rank(&self) -> usize {
        self.pivot_cols.len()
    }

    pub fn to_matrix<S: Scalar>(&self, rows: usize, cols: usize) -> Matrix<S> {
        let mut m = Matrix::zeros(rows, cols);
        for (r, &c) in self.pivot_cols.iter().enumerate() {
            m.set(r, c, S::one());
        }
        m
    }
}

impl ReversedProfile {
    pub fn rank(&self) -> usize {
        self.pivot_rows.len()
    }

    pub fn to_matrix<S: Scalar>(&self, rows: usize, cols: usize) -> Matrix<S> {
        let mut m = Matrix::zeros(rows, cols);
        let offset = cols - self.rank();
        for (i, &r) in self.pivot_rows.iter().enumerate() {
            m.set(r, offset + i, S::one());
        }
        m
    }
}

impl<S: Scalar> Matrix<S> {
    /// Reduced row echelon form together with the row operations producing it.
    pub fn rref(&self) -> RowEchelon<S> {
        let mut m = self.clone();
        let mut t = Matrix::identity(self.rows());
        let mut ops = Vec::new();
        let mut pivots = Vec::new();
        let mut record = |m: &mut Matrix<S>, t: &mut Matrix<S>, op: ElemOp<S>| {
            m.apply_left(&op);
            t.apply_left(&op);
            ops.push(op);
        };
        for c in 0..self.cols() {
            let r = pivots.len();
            if r == self.rows() {
                break;
            }
            let Some(p) = (r..self.rows()).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                record(&mut m, &mut t, ElemOp::Swap(p, r));
            }
            if !m.get(r, c).is_one() {
                let inv = m.get(r, c).inverse().expect("pivot is nonzero");
                record(&mut m, &mut t, ElemOp::Scale(r, inv));
            }
            for i in 0..self.rows() {
                if i != r && !m.get(i, c).is_zero() {
                    let factor = -m.get(i, c).clone();
                    record(&mut m, &mut t, ElemOp::AddMultiple { target: i, source: r, factor });
                }
            }
            pivots.push(c);
        }
        RowEchelon {
            reduced: m,
            transform: t,
            pivots,
            ops,
        }
    }

    /// Reversed reduced column echelon form, obtained by conjugating row
    /// reduction with the anti-transpose.
    pub fn reversed_column_echelon(&self) -> ColumnEchelon<S> {
        let flipped = self.anti_transpose().rref();
        let n = self.cols();
        let ops = flipped
            .ops
            .iter()
            .map(|op| op.map_indices(|i| n - 1 - i).transpose())
            .collect();
        ColumnEchelon {
            reduced: flipped.reduced.anti_transpose(),
            transform: flipped.transform.anti_transpose(),
            ops,
        }
    }

    /// Pivot profile if `self` is in barcode form: 0/1 entries, nonzero rows
    /// on top, one 1 per nonzero row, pivot columns strictly increasing.
    pub fn barcode_profile(&self) -> Option<PivotProfile> {
        let mut pivot_cols = Vec::new();
        let mut seen_zero_row = false;
        for r in 0..self.rows() {
            let nonzero: Vec<usize> = (0..self.cols()).filter(|&c| !self.get(r, c).is_zero()).collect();
            match nonzero.as_slice() {
                [] => seen_zero_row = true,
                [c] if !seen_zero_row && self.get(r, *c).is_one() => {
                    if pivot_cols.last().is_some_and(|&last| last >= *c) {
                        return None;
                    }
                    pivot_cols.push(*c);
                }
                _ => return None,
            }
        }
        Some(PivotProfile { pivot_cols })
    }

    pub fn is_barcode_form(&self) -> bool {
        self.barcode_profile().is_some()
    }

    /// Pivot rows if `self` is in reversed barcode form: 0/1 entries, the
    /// nonzero columns are the rightmost ones, one 1 per nonzero column, and
    /// its row index increases from left to right.
    pub fn reversed_barcode_profile(&self) -> Option<ReversedProfile> {
        let mut pivot_rows = Vec::new();
        let mut seen_nonzero_col = false;
        for c in 0..self.cols() {
            let nonzero: Vec<usize> = (0..self.rows()).filter(|&r| !self.get(r, c).is_zero()).collect();
            match nonzero.as_slice() {
                [] if !seen_nonzero_col => {}
                [r] if self.get(*r, c).is_one() => {
                    if pivot_rows.last().is_some_and(|&last| last >= *r) {
                        return None;
                    }
                    seen_nonzero_col = true;
                    pivot_rows.push(*r);
                }
                _ => return None,
            }
        }
        Some(ReversedProfile { pivot_rows })
    }

    pub fn is_reversed_barcode_form(&self) -> bool {
        self.reversed_barcode_profile().is_some()
    }
}
