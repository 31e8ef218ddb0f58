use std::fmt;

use crate::field::Scalar;

use super::Matrix;

/// An invertible elementary matrix, stored by its action.
///
/// Left multiplication acts on rows, right multiplication on columns:
///
/// | op | `E·M` | `M·E` |
/// |----|-------|-------|
/// | `Swap(a, b)` | swap rows a, b | swap cols a, b |
/// | `Scale(i, λ)` | Row(i) *= λ | Col(i) *= λ |
/// | `AddMultiple { target, source, factor }` | Row(target) += λ·Row(source) | Col(source) += λ·Col(target) |
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ElemOp<S> {
    Swap(usize, usize),
    Scale(usize, S),
    AddMultiple { target: usize, source: usize, factor: S },
}

impl<S: Scalar> ElemOp<S> {
    pub fn inverse(&self) -> Self {
        match self {
            ElemOp::Swap(a, b) => ElemOp::Swap(*a, *b),
            ElemOp::Scale(i, l) => ElemOp::Scale(*i, l.inverse().expect("scaling by zero")),
            ElemOp::AddMultiple { target, source, factor } => ElemOp::AddMultiple {
                target: *target,
                source: *source,
                factor: -factor.clone(),
            },
        }
    }

    /// The same matrix seen through the transpose.
    pub fn transpose(&self) -> Self {
        match self {
            ElemOp::AddMultiple { target, source, factor } => ElemOp::AddMultiple {
                target: *source,
                source: *target,
                factor: factor.clone(),
            },
            other => other.clone(),
        }
    }

    /// Relabels indices through `f`, e.g. the reversal used by anti-transposition.
    pub fn map_indices(&self, f: impl Fn(usize) -> usize) -> Self {
        match self {
            ElemOp::Swap(a, b) => ElemOp::Swap(f(*a), f(*b)),
            ElemOp::Scale(i, l) => ElemOp::Scale(f(*i), l.clone()),
            ElemOp::AddMultiple { target, source, factor } => ElemOp::AddMultiple {
                target: f(*target),
                source: f(*source),
                factor: factor.clone(),
            },
        }
    }

    pub fn to_matrix(&self, n: usize) -> Matrix<S> {
        let mut m = Matrix::identity(n);
        m.apply_left(self);
        m
    }
}

impl<S: Scalar> Matrix<S> {
    /// `self ← E·self`.
    pub fn apply_left(&mut self, op: &ElemOp<S>) {
        match op {
            ElemOp::Swap(a, b) => self.swap_rows(*a, *b),
            ElemOp::Scale(i, l) => self.scale_row(*i, l),
            ElemOp::AddMultiple { target, source, factor } => {
                self.add_row_multiple(*target, *source, factor)
            }
        }
    }

    /// `self ← self·E`.
    pub fn apply_right(&mut self, op: &ElemOp<S>) {
        match op {
            ElemOp::Swap(a, b) => self.swap_cols(*a, *b),
            ElemOp::Scale(i, l) => self.scale_col(*i, l),
            ElemOp::AddMultiple { target, source, factor } => {
                self.add_col_multiple(*source, *target, factor)
            }
        }
    }
}

impl<S: Scalar> fmt::Display for ElemOp<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ElemOp::Swap(a, b) => write!(f, "swap {a} {b}"),
            ElemOp::Scale(i, l) => write!(f, "scale {i} {l}"),
            ElemOp::AddMultiple { target, source, factor } => {
                write!(f, "add {target} {source} {factor}")
            }
        }
    }
}
