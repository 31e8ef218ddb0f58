use thiserror::Error;

use crate::field::Scalar;
use crate::matrix::{ElemOp, Matrix, MatrixError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BasisChangeError {
    #[error("g_{index} is not invertible")]
    Singular { index: usize },
    #[error("g_{index} is {rows}x{cols}, not square")]
    NotSquare { index: usize, rows: usize, cols: usize },
    #[error("stored inverse of g_{index} is wrong")]
    BadInverse { index: usize },
    #[error("basis changes have different dimensions")]
    DimensionMismatch,
}

/// An element `g = (g_0, …, g_ℓ)` of `∏ GL(n_i)`, stored with its inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisChange<S> {
    components: Vec<Matrix<S>>,
    inverses: Vec<Matrix<S>>,
}

impl<S: Scalar> BasisChange<S> {
    /// Computes and stores inverses; fails on a singular component.
    pub fn new(components: Vec<Matrix<S>>) -> Result<Self, BasisChangeError> {
        let mut inverses = Vec::with_capacity(components.len());
        for (index, g) in components.iter().enumerate() {
            let inv = g.inverse().map_err(|e| match e {
                MatrixError::NotSquare(rows, cols) => BasisChangeError::NotSquare { index, rows, cols },
                _ => BasisChangeError::Singular { index },
            })?;
            inverses.push(inv);
        }
        Ok(BasisChange { components, inverses })
    }

    /// Accepts externally supplied inverses after checking both products.
    pub fn with_inverses(
        components: Vec<Matrix<S>>,
        inverses: Vec<Matrix<S>>,
    ) -> Result<Self, BasisChangeError> {
        if components.len() != inverses.len() {
            return Err(BasisChangeError::DimensionMismatch);
        }
        for (index, (g, h)) in components.iter().zip(&inverses).enumerate() {
            if !g.is_square() {
                return Err(BasisChangeError::NotSquare { index, rows: g.rows(), cols: g.cols() });
            }
            let n = g.rows();
            let ok = g.try_mul(h).is_ok_and(|p| p == Matrix::identity(n))
                && h.try_mul(g).is_ok_and(|p| p == Matrix::identity(n));
            if !ok {
                return Err(BasisChangeError::BadInverse { index });
            }
        }
        Ok(BasisChange { components, inverses })
    }

    pub(crate) fn from_parts_unchecked(components: Vec<Matrix<S>>, inverses: Vec<Matrix<S>>) -> Self {
        debug_assert_eq!(components.len(), inverses.len());
        BasisChange { components, inverses }
    }

    pub fn identity(dims: &[usize]) -> Self {
        let components: Vec<_> = dims.iter().map(|&n| Matrix::identity(n)).collect();
        BasisChange {
            inverses: components.clone(),
            components,
        }
    }

    pub fn dims(&self) -> Vec<usize> {
        self.components.iter().map(Matrix::rows).collect()
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn component(&self, i: usize) -> &Matrix<S> {
        &self.components[i]
    }

    pub fn inverse_component(&self, i: usize) -> &Matrix<S> {
        &self.inverses[i]
    }

    pub fn components(&self) -> &[Matrix<S>] {
        &self.components
    }

    pub fn inverse(&self) -> Self {
        BasisChange {
            components: self.inverses.clone(),
            inverses: self.components.clone(),
        }
    }

    /// Componentwise product `self·other`, i.e. apply `other` first.
    pub fn compose(&self, other: &Self) -> Result<Self, BasisChangeError> {
        if self.dims() != other.dims() {
            return Err(BasisChangeError::DimensionMismatch);
        }
        let components = self.components.iter().zip(&other.components).map(|(a, b)| a * b).collect();
        let inverses = self.inverses.iter().zip(&other.inverses).map(|(a, b)| b * a).collect();
        Ok(BasisChange { components, inverses })
    }

    /// `g_i ← E·g_i`, keeping the stored inverse in sync.
    pub fn push_left(&mut self, i: usize, op: &ElemOp<S>) {
        self.components[i].apply_left(op);
        self.inverses[i].apply_right(&op.inverse());
    }

    /// Recomputes every product `g_i·g_i⁻¹`.
    pub fn is_certified(&self) -> bool {
        self.components.iter().zip(&self.inverses).all(|(g, h)| {
            g.is_square()
                && g.try_mul(h).is_ok_and(|p| p == Matrix::identity(g.rows()))
                && h.try_mul(g).is_ok_and(|p| p == Matrix::identity(g.rows()))
        })
    }

    /// Splits into the component and inverse vectors.
    pub fn into_parts(self) -> (Vec<Matrix<S>>, Vec<Matrix<S>>) {
        (self.components, self.inverses)
    }
}
