//! Reduction of an ordinary persistence module to barcode form.
//!
//! The engine grows a reduced prefix one matrix at a time. The new matrix is
//! put in reduced row echelon form, after which every entry to the right of a
//! pivot is removed by a column operation. A column operation on `A_k` is a
//! change of basis at `V_{k-1}`, which in turn acts on the rows of `A_{k-1}`;
//! when that disturbs `A_{k-1}` the repair cascades one step further down.

use std::fmt;

use thiserror::Error;

use crate::field::Scalar;
use crate::matrix::{ElemOp, Matrix};
use crate::persistence::{
    arrow_spaces, canonical_matrices, validate_oriented, BarOrder, Barcode, BasisChange, CensusError,
    Direction, PersistenceModule, QuiverModule, ShapeError, StandardOrder,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error(transparent)]
    Shape(#[from] ShapeError),
    #[error("A_{index} is not in barcode form")]
    NotBarcodeForm { index: usize },
    #[error("A_{index} has no pivot at ({row},{col})")]
    NoPivot { index: usize, row: usize, col: usize },
    #[error("A_{index}({row},{col}) must be a nonzero entry right of the pivot")]
    NothingToEliminate { index: usize, row: usize, col: usize },
    #[error("matrix index {index} outside 1..={length}")]
    BadIndex { index: usize, length: usize },
}

/// Work done by a reduction, for complexity measurements.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct OpCounter {
    /// Row operations applied to structure matrices.
    pub row_ops: u64,
    /// Column operations applied to structure matrices.
    pub col_ops: u64,
    /// Scalar multiplications spent on structure matrices.
    pub scalar_mults: u64,
    /// Recursive steps taken by cascades.
    pub cascade_steps: u64,
}

impl OpCounter {
    pub fn elementary(&self) -> u64 {
        self.row_ops + self.col_ops
    }
}

/// One elementary change of basis: `g_vertex ← E·g_vertex`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceEntry<S> {
    pub vertex: usize,
    pub op: ElemOp<S>,
}

impl<S: Scalar> fmt::Display for TraceEntry<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "V{} {}", self.vertex, self.op)
    }
}

/// Output of a reduction: `change` conjugates the input into `reduced`.
#[derive(Clone, Debug)]
pub struct ReductionResult<S> {
    pub reduced: Vec<Matrix<S>>,
    pub change: BasisChange<S>,
    pub op_count: OpCounter,
    /// Elementary basis changes in order, when requested.
    pub trace: Option<Vec<TraceEntry<S>>>,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ReductionOptions {
    pub record_trace: bool,
}

/// A partially reduced module together with the accumulated basis change.
///
/// Shared by the ordinary and zigzag engines: it only knows how an
/// elementary change of basis at one vertex acts on the neighbouring arrows.
pub(crate) struct Workspace<S> {
    pub directions: Vec<Direction>,
    /// Matrices of the prefix currently under reduction.
    pub matrices: Vec<Matrix<S>>,
    pub change: BasisChange<S>,
    pub counter: OpCounter,
    pub trace: Option<Vec<TraceEntry<S>>>,
}

impl<S: Scalar> Workspace<S> {
    pub fn new(dims: &[usize], directions: &[Direction], options: ReductionOptions) -> Self {
        Workspace {
            directions: directions.to_vec(),
            matrices: Vec::with_capacity(directions.len()),
            change: BasisChange::identity(dims),
            counter: OpCounter::default(),
            trace: options.record_trace.then(Vec::new),
        }
    }

    /// Changes basis at `vertex` by `op`, updating every arrow of the
    /// prefix that touches it.
    pub fn vertex_op(&mut self, vertex: usize, op: ElemOp<S>) {
        let inverse = op.inverse();
        for arrow in [vertex, vertex + 1] {
            if arrow == 0 || arrow > self.matrices.len() {
                continue;
            }
            let (row_space, _) = arrow_spaces(arrow, self.directions[arrow - 1]);
            let m = &mut self.matrices[arrow - 1];
            if row_space == vertex {
                self.counter.row_ops += 1;
                self.counter.scalar_mults += m.cols() as u64;
                m.apply_left(&op);
            } else {
                self.counter.col_ops += 1;
                self.counter.scalar_mults += m.rows() as u64;
                m.apply_right(&inverse);
            }
        }
        self.change.push_left(vertex, &op);
        if let Some(trace) = &mut self.trace {
            trace.push(TraceEntry { vertex, op });
        }
    }

    /// Appends arrow `i = len + 1` expressed in the current bases.
    pub fn append(&mut self, a: &Matrix<S>) {
        let arrow = self.matrices.len() + 1;
        let (row_space, col_space) = arrow_spaces(arrow, self.directions[arrow - 1]);
        let m = &(self.change.component(row_space) * a) * self.change.inverse_component(col_space);
        self.matrices.push(m);
    }

    pub fn finish(self) -> ReductionResult<S> {
        ReductionResult {
            reduced: self.matrices,
            change: self.change,
            op_count: self.counter,
            trace: self.trace,
        }
    }
}

fn forward_cascade<S: Scalar>(ws: &mut Workspace<S>, mut k: usize, mut r: usize, mut q: usize, mut p: usize) {
    loop {
        ws.counter.cascade_steps += 1;
        let alpha = ws.matrices[k - 1].get(r, p).clone();
        // Row(q) += α·Row(p) at V_{k-1}; on A_k this is Col(p) -= α·Col(q).
        let below_nonzero = k > 1 && !ws.matrices[k - 2].row_is_zero(p);
        ws.vertex_op(k - 1, ElemOp::AddMultiple { target: q, source: p, factor: alpha });
        if !below_nonzero {
            return;
        }
        let below = &ws.matrices[k - 2];
        let c = below.row_pivot(q).expect("row q precedes a nonzero row");
        let d = below.row_pivot(p).expect("row p is nonzero");
        // Row q now carries a stray α at column d: clear it one level down.
        (k, r, q, p) = (k - 1, q, c, d);
    }
}

fn check_prefix_form<S: Scalar>(matrices: &[Matrix<S>]) -> Result<(), ReductionError> {
    match matrices.iter().position(|m| !m.is_barcode_form()) {
        Some(i) => Err(ReductionError::NotBarcodeForm { index: i + 1 }),
        None => Ok(()),
    }
}

fn workspace_from<S: Scalar>(
    matrices: &[Matrix<S>],
    g: &BasisChange<S>,
) -> Result<Workspace<S>, ReductionError> {
    let directions = vec![Direction::Forward; matrices.len()];
    let dims = g.dims();
    validate_oriented(&dims, &directions, matrices)?;
    let mut ws = Workspace::new(&dims, &directions, ReductionOptions::default());
    ws.matrices = matrices.to_vec();
    ws.change = g.clone();
    Ok(ws)
}

/// Zeroes the entry `A_k(r,p)` right of the pivot `A_k(r,q)`, keeping
/// `A_1,…,A_{k-1}` in barcode form. Indices `k` are 1-based, `r, q, p` 0-based.
///
/// Returns the new matrices and `g` updated so that the new matrices are the
/// old ones conjugated by `g'·g⁻¹`.
pub fn col_op_cascade<S: Scalar>(
    matrices: &[Matrix<S>],
    g: &BasisChange<S>,
    k: usize,
    r: usize,
    q: usize,
    p: usize,
) -> Result<(Vec<Matrix<S>>, BasisChange<S>), ReductionError> {
    if k == 0 || k > matrices.len() {
        return Err(ReductionError::BadIndex { index: k, length: matrices.len() });
    }
    check_prefix_form(&matrices[..k - 1])?;
    let a = &matrices[k - 1];
    let in_range = r < a.rows() && q < a.cols() && p < a.cols();
    let pivot = in_range
        && a.get(r, q).is_one()
        && (0..a.rows()).all(|i| i == r || a.get(i, q).is_zero())
        && a.row_pivot(r) == Some(q);
    if !pivot {
        return Err(ReductionError::NoPivot { index: k, row: r, col: q });
    }
    if p <= q || a.get(r, p).is_zero() {
        return Err(ReductionError::NothingToEliminate { index: k, row: r, col: p });
    }
    let mut ws = workspace_from(matrices, g)?;
    ws.matrices.truncate(k);
    forward_cascade(&mut ws, k, r, q, p);
    let mut out = ws.matrices;
    out.extend_from_slice(&matrices[k..]);
    Ok((out, ws.change))
}

/// Row reduces the last matrix and removes every non-pivot entry, leaving
/// all matrices in barcode form.
fn reduce_last_in_place<S: Scalar>(ws: &mut Workspace<S>) {
    let k = ws.matrices.len();
    let echelon = ws.matrices[k - 1].rref();
    for op in echelon.ops {
        ws.vertex_op(k, op);
    }
    for (r, &q) in echelon.pivots.iter().enumerate() {
        for p in q + 1..ws.matrices[k - 1].cols() {
            if !ws.matrices[k - 1].get(r, p).is_zero() {
                forward_cascade(ws, k, r, q, p);
            }
        }
    }
}

/// Reduces the last matrix of a sequence whose other matrices are already
/// in barcode form.
pub fn reduce_last<S: Scalar>(
    matrices: &[Matrix<S>],
    g: &BasisChange<S>,
) -> Result<(Vec<Matrix<S>>, BasisChange<S>), ReductionError> {
    if matrices.is_empty() {
        return Ok((Vec::new(), g.clone()));
    }
    check_prefix_form(&matrices[..matrices.len() - 1])?;
    let mut ws = workspace_from(matrices, g)?;
    reduce_last_in_place(&mut ws);
    Ok((ws.matrices, ws.change))
}

/// Puts a persistence module in barcode form.
pub fn comp_pers<S: Scalar>(module: &PersistenceModule<S>) -> ReductionResult<S> {
    comp_pers_with(module, ReductionOptions::default(), |_, _| {})
}

/// [`comp_pers`] with options and an observer called with the prefix length
/// and the prefix matrices after each outer step.
pub fn comp_pers_with<S: Scalar>(
    module: &PersistenceModule<S>,
    options: ReductionOptions,
    mut observe: impl FnMut(usize, &[Matrix<S>]),
) -> ReductionResult<S> {
    let mut ws = Workspace::new(module.dims(), &module.directions(), options);
    for a in module.matrices() {
        ws.append(a);
        reduce_last_in_place(&mut ws);
        observe(ws.matrices.len(), &ws.matrices);
    }
    ws.finish()
}

/// A module type with a reduction engine and an order on its bars.
pub trait BarcodeModule: QuiverModule {
    type Order: BarOrder;

    fn bar_order(&self) -> Self::Order;

    /// Conjugates into barcode form.
    fn reduce(&self) -> ReductionResult<Self::Scalar>;

    /// `⊕ I[a]^{d_a}` in the ordered barcode basis for `order`.
    fn canonical(bar: &Barcode, order: &Self::Order) -> Result<Self, CensusError>;
}

impl<S: Scalar> BarcodeModule for PersistenceModule<S> {
    type Order = StandardOrder;

    fn bar_order(&self) -> StandardOrder {
        StandardOrder::new(self.length())
    }

    fn reduce(&self) -> ReductionResult<S> {
        comp_pers(self)
    }

    fn canonical(bar: &Barcode, order: &StandardOrder) -> Result<Self, CensusError> {
        canonical_matrices(bar, order.length())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Fp, Rational};
    use crate::persistence::{apply_basis_change, extract_barcode, Interval};

    type F5 = Fp<5>;

    fn cascade() -> Vec<Matrix<Rational>> {
        vec![
            Matrix::from_ints(&[[1, 0, 0], [0, 1, 0], [0, 0, 0]]),
            Matrix::identity(3),
            Matrix::from_ints(&[[1, 0, 1], [0, 1, 1], [0, 0, 0]]),
        ]
    }

    #[test]
    fn first_cascade_of_cascade() {
        let a = cascade();
        let g = BasisChange::identity(&[3, 3, 3, 3]);
        let (b, h) = col_op_cascade(&a, &g, 3, 1, 1, 2).unwrap();
        assert_eq!(b[2], Matrix::from_ints(&[[1, 0, 1], [0, 1, 0], [0, 0, 0]]));
        assert_eq!(b[1], Matrix::identity(3));
        assert_eq!(b[0], a[0]);
        assert_eq!(apply_basis_change(&h, &a).unwrap(), b);
    }

    #[test]
    fn case_one_touches_only_the_last_matrix() {
        let a: Vec<Matrix<Rational>> = vec![
            Matrix::from_ints(&[[1, 0], [0, 0]]),
            Matrix::from_ints(&[[1, 3]]),
        ];
        let g = BasisChange::identity(&[2, 2, 1]);
        let (b, h) = col_op_cascade(&a, &g, 2, 0, 0, 1).unwrap();
        assert_eq!(b[0], a[0]);
        assert_eq!(b[1], Matrix::from_ints(&[[1, 0]]));
        assert_eq!(apply_basis_change(&h, &a).unwrap(), b);
    }

    #[test]
    fn cascade_preconditions() {
        let a: Vec<Matrix<Rational>> = vec![Matrix::from_ints(&[[2, 1]])];
        let g = BasisChange::identity(&[2, 1]);
        assert!(matches!(col_op_cascade(&a, &g, 1, 0, 0, 1), Err(ReductionError::NoPivot { .. })));
        let a: Vec<Matrix<Rational>> = vec![Matrix::from_ints(&[[0, 1], [1, 0]]), Matrix::from_ints(&[[1, 1]])];
        let g = BasisChange::identity(&[2, 2, 1]);
        assert_eq!(
            col_op_cascade(&a, &g, 2, 0, 0, 1).unwrap_err(),
            ReductionError::NotBarcodeForm { index: 1 }
        );
    }

    #[test]
    fn cascade_end_to_end() {
        let module = PersistenceModule::from_matrices(3, cascade()).unwrap();
        let result = comp_pers(&module);
        assert_eq!(
            result.reduced,
            vec![
                Matrix::from_ints(&[[1, 0, 0], [0, 1, 0], [0, 0, 0]]),
                Matrix::identity(3),
                Matrix::from_ints(&[[1, 0, 0], [0, 1, 0], [0, 0, 0]]),
            ]
        );
        assert_eq!(apply_basis_change(&result.change, module.matrices()).unwrap(), result.reduced);
        assert!(result.change.is_certified());
    }

    #[test]
    fn reduce_last_on_a_modified_three_bar_module() {
        let a: Vec<Matrix<Rational>> = vec![
            Matrix::from_ints(&[[1, 0], [0, 1], [0, 0]]),
            Matrix::from_ints(&[[1, 0, 0], [0, 0, 1]]),
            Matrix::from_ints(&[[1, 0], [1, 1]]),
        ];
        let g = BasisChange::identity(&[2, 3, 2, 2]);
        let (b, h) = reduce_last(&a, &g).unwrap();
        assert!(b.iter().all(Matrix::is_barcode_form));
        assert_eq!(apply_basis_change(&h, &a).unwrap(), b);
    }

    #[test]
    fn barcode_form_input_is_a_fixed_point() {
        let a: Vec<Matrix<F5>> = vec![
            Matrix::from_ints(&[[1, 0], [0, 1], [0, 0]]),
            Matrix::from_ints(&[[1, 0, 0], [0, 0, 1]]),
            Matrix::from_ints(&[[1, 0], [0, 1]]),
        ];
        let module = PersistenceModule::from_matrices(2, a.clone()).unwrap();
        let result = comp_pers(&module);
        assert_eq!(result.reduced, a);
        assert_eq!(result.change, BasisChange::identity(&[2, 3, 2, 2]));
    }

    #[test]
    fn degenerate_shapes() {
        let empty = PersistenceModule::<F5>::new(vec![4], vec![]).unwrap();
        let result = comp_pers(&empty);
        assert!(result.reduced.is_empty());
        assert_eq!(result.op_count, OpCounter::default());

        let zero = PersistenceModule::<F5>::zero(vec![0, 2, 0, 1]);
        let result = comp_pers(&zero);
        let module = PersistenceModule::new(vec![0, 2, 0, 1], result.reduced).unwrap();
        let expected: Barcode = [(Interval::of(1, 1), 2), (Interval::of(3, 3), 1)].into_iter().collect();
        assert_eq!(extract_barcode(&module).unwrap(), expected);
    }

    #[test]
    fn prefixes_stay_reduced_and_trace_replays() {
        let a: Vec<Matrix<F5>> = vec![
            Matrix::from_ints(&[[1, 2, 3], [4, 0, 1]]),
            Matrix::from_ints(&[[2, 2], [1, 0], [3, 1]]),
            Matrix::from_ints(&[[1, 1, 1], [0, 2, 4]]),
        ];
        let module = PersistenceModule::from_matrices(3, a).unwrap();
        let mut seen = Vec::new();
        let result = comp_pers_with(&module, ReductionOptions { record_trace: true }, |len, prefix| {
            assert!(prefix.iter().all(Matrix::is_barcode_form));
            seen.push(len);
        });
        assert_eq!(seen, vec![1, 2, 3]);
        let mut g = BasisChange::identity(module.dims());
        for entry in result.trace.as_ref().unwrap() {
            g.push_left(entry.vertex, &entry.op);
        }
        assert_eq!(g, result.change);
    }
}
