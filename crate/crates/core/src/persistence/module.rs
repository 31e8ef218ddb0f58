use thiserror::Error;

use crate::field::Scalar;
use crate::matrix::Matrix;

use super::BasisChange;

/// Orientation of one arrow of a type-A quiver.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    /// `V_{i-1} → V_i`, stored as an `n_i × n_{i-1}` matrix.
    Forward,
    /// `V_{i-1} ← V_i`, stored as an `n_{i-1} × n_i` matrix.
    Backward,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShapeError {
    #[error("a module needs at least one space")]
    NoSpaces,
    #[error("expected {expected} matrices for length {expected}, found {found}")]
    MatrixCount { expected: usize, found: usize },
    #[error("expected {expected} arrow directions, found {found}")]
    DirectionCount { expected: usize, found: usize },
    #[error("A_{index} row count {found} ≠ n_{space} = {expected}")]
    Rows { index: usize, space: usize, expected: usize, found: usize },
    #[error("A_{index} column count {found} ≠ n_{space} = {expected}")]
    Cols { index: usize, space: usize, expected: usize, found: usize },
    #[error("basis change has {found} components, expected {expected}")]
    ComponentCount { expected: usize, found: usize },
    #[error("g_{index} is {found}x{found}, expected {expected}x{expected}")]
    ComponentSize { index: usize, expected: usize, found: usize },
}

/// Source and target vertex of arrow `i` (1-based) as `(rows, cols)` spaces.
pub(crate) fn arrow_spaces(arrow: usize, direction: Direction) -> (usize, usize) {
    match direction {
        Direction::Forward => (arrow, arrow - 1),
        Direction::Backward => (arrow - 1, arrow),
    }
}

/// Checks matrix shapes against `dims` for arbitrary arrow orientations,
/// reporting the first violated constraint.
pub fn validate_oriented<S: Scalar>(
    dims: &[usize],
    directions: &[Direction],
    matrices: &[Matrix<S>],
) -> Result<(), ShapeError> {
    if dims.is_empty() {
        return Err(ShapeError::NoSpaces);
    }
    let length = dims.len() - 1;
    if directions.len() != length {
        return Err(ShapeError::DirectionCount {
            expected: length,
            found: directions.len(),
        });
    }
    if matrices.len() != length {
        return Err(ShapeError::MatrixCount {
            expected: length,
            found: matrices.len(),
        });
    }
    for (i, (m, &dir)) in matrices.iter().zip(directions).enumerate() {
        let index = i + 1;
        let (row_space, col_space) = arrow_spaces(index, dir);
        if m.rows() != dims[row_space] {
            return Err(ShapeError::Rows {
                index,
                space: row_space,
                expected: dims[row_space],
                found: m.rows(),
            });
        }
        if m.cols() != dims[col_space] {
            return Err(ShapeError::Cols {
                index,
                space: col_space,
                expected: dims[col_space],
                found: m.cols(),
            });
        }
    }
    Ok(())
}

/// Shape check for an ordinary persistence module (all arrows forward).
pub fn validate<S: Scalar>(dims: &[usize], matrices: &[Matrix<S>]) -> Result<(), ShapeError> {
    let directions = vec![Direction::Forward; dims.len().saturating_sub(1)];
    validate_oriented(dims, &directions, matrices)
}

/// Direction-aware group action: forward arrows become `g_i·A_i·g_{i-1}⁻¹`,
/// backward arrows `g_{i-1}·A_i·g_i⁻¹`.
pub fn conjugate<S: Scalar>(
    g: &BasisChange<S>,
    directions: &[Direction],
    matrices: &[Matrix<S>],
) -> Result<Vec<Matrix<S>>, ShapeError> {
    let dims = g.dims();
    validate_oriented(&dims, directions, matrices)?;
    Ok(matrices
        .iter()
        .zip(directions)
        .enumerate()
        .map(|(i, (a, &dir))| {
            let (row_space, col_space) = arrow_spaces(i + 1, dir);
            &(g.component(row_space) * a) * g.inverse_component(col_space)
        })
        .collect())
}

/// `(gA)_i = g_i·A_i·g_{i-1}⁻¹` for every `i`.
pub fn apply_basis_change<S: Scalar>(
    g: &BasisChange<S>,
    matrices: &[Matrix<S>],
) -> Result<Vec<Matrix<S>>, ShapeError> {
    conjugate(g, &vec![Direction::Forward; matrices.len()], matrices)
}

/// Common view of ordinary and zigzag modules: spaces `𝔽^{n_0},…,𝔽^{n_ℓ}`
/// joined by oriented matrices.
pub trait QuiverModule: Clone {
    type Scalar: Scalar;

    fn dims(&self) -> &[usize];
    fn matrices(&self) -> &[Matrix<Self::Scalar>];
    fn directions(&self) -> Vec<Direction>;

    /// A module of the same shape and orientation with different matrices.
    fn with_matrices(&self, matrices: Vec<Matrix<Self::Scalar>>) -> Result<Self, ShapeError>;

    fn length(&self) -> usize {
        self.dims().len() - 1
    }

    /// Direction of arrow `i`, 1-based.
    fn direction(&self, arrow: usize) -> Direction {
        self.directions()[arrow - 1]
    }

    fn transformed(&self, g: &BasisChange<Self::Scalar>) -> Result<Self, ShapeError> {
        self.with_matrices(conjugate(g, &self.directions(), self.matrices())?)
    }

    /// Whether `g` fixes every structure matrix.
    fn is_fixed_by(&self, g: &BasisChange<Self::Scalar>) -> Result<bool, ShapeError> {
        Ok(conjugate(g, &self.directions(), self.matrices())? == self.matrices())
    }
}

/// `𝔽^{n_0} → 𝔽^{n_1} → ⋯ → 𝔽^{n_ℓ}` with `A_i` of size `n_i × n_{i-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PersistenceModule<S> {
    dims: Vec<usize>,
    matrices: Vec<Matrix<S>>,
}

impl<S: Scalar> PersistenceModule<S> {
    pub fn new(dims: Vec<usize>, matrices: Vec<Matrix<S>>) -> Result<Self, ShapeError> {
        validate(&dims, &matrices)?;
        Ok(PersistenceModule { dims, matrices })
    }

    /// Infers the dimensions from the matrices; needs `n_0` for `ℓ = 0` and
    /// for a module whose first matrix has no rows.
    pub fn from_matrices(n0: usize, matrices: Vec<Matrix<S>>) -> Result<Self, ShapeError> {
        let mut dims = vec![n0];
        dims.extend(matrices.iter().map(Matrix::rows));
        Self::new(dims, matrices)
    }

    /// Direct sum of the interval-free data: all maps zero.
    pub fn zero(dims: Vec<usize>) -> Self {
        let matrices = dims.windows(2).map(|w| Matrix::zeros(w[1], w[0])).collect();
        PersistenceModule { dims, matrices }
    }

    pub fn into_matrices(self) -> Vec<Matrix<S>> {
        self.matrices
    }

    /// `A_i`, 1-based.
    pub fn matrix(&self, i: usize) -> &Matrix<S> {
        &self.matrices[i - 1]
    }
}

impl<S: Scalar> QuiverModule for PersistenceModule<S> {
    type Scalar = S;

    fn dims(&self) -> &[usize] {
        &self.dims
    }

    fn matrices(&self) -> &[Matrix<S>] {
        &self.matrices
    }

    fn directions(&self) -> Vec<Direction> {
        vec![Direction::Forward; self.matrices.len()]
    }

    fn with_matrices(&self, matrices: Vec<Matrix<S>>) -> Result<Self, ShapeError> {
        PersistenceModule::new(self.dims.clone(), matrices)
    }
}
