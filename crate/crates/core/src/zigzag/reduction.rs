//! Reduction of a zigzag module to zigzag barcode form.
//!
//! As in the ordinary case the reduced prefix grows one arrow at a time, but
//! a repair at `V_{k-1}` lands on `A_{k-1}` as a row operation when that
//! arrow points forward and as a column operation when it points backward.
//! The stray entry it leaves is then cleared with the kind of operation that
//! suits the orientation of `A_{k-1}`, giving four cascade cases.

use crate::field::Scalar;
use crate::matrix::{ElemOp, Matrix};
use crate::persistence::{Barcode, CensusError, Direction, QuiverModule};
use crate::reduction::{BarcodeModule, ReductionOptions, ReductionResult, Workspace};

use super::{canonical_zigzag, TauOrder, ZigzagModule};

/// A nonzero entry to clear, together with the pivot used to clear it.
enum Stray {
    /// Forward `A_k`: entry `(r, p)` right of the pivot `(r, q)`.
    Right { k: usize, r: usize, q: usize, p: usize },
    /// Backward `A_k`: entry `(s, q)` above the pivot `(r, q)`, whose row
    /// is otherwise zero.
    Above { k: usize, s: usize, r: usize, q: usize },
}

fn cascade<S: Scalar>(ws: &mut Workspace<S>, mut stray: Stray) {
    loop {
        ws.counter.cascade_steps += 1;
        let next = match stray {
            Stray::Right { k, r, q, p } => {
                let alpha = ws.matrices[k - 1].get(r, p).clone();
                // g_{k-1} = e_{q,p}(α): Col(p) -= α·Col(q) on A_k.
                ws.vertex_op(k - 1, ElemOp::AddMultiple { target: q, source: p, factor: alpha });
                if k == 1 {
                    return;
                }
                let below = &ws.matrices[k - 2];
                match ws.directions[k - 2] {
                    // Row(q) += α·Row(p) on A_{k-1}.
                    Direction::Forward => match (below.row_pivot(q), below.row_pivot(p)) {
                        (Some(c), Some(d)) if c < d => Stray::Right { k: k - 1, r: q, q: c, p: d },
                        _ => return,
                    },
                    // Col(p) -= α·Col(q) on A_{k-1}; column p was the clean one.
                    Direction::Backward => match (col_pivot(below, q), col_pivot(below, p)) {
                        (Some(c), Some(d)) if c != d => Stray::Above { k: k - 1, s: c, r: d, q: p },
                        _ => return,
                    },
                }
            }
            Stray::Above { k, s, r, q } => {
                let beta = ws.matrices[k - 1].get(s, q).clone();
                // g_{k-1} = e_{s,r}(-β): Row(s) -= β·Row(r) on A_k.
                ws.vertex_op(k - 1, ElemOp::AddMultiple { target: s, source: r, factor: -beta });
                if k == 1 {
                    return;
                }
                let below = &ws.matrices[k - 2];
                match ws.directions[k - 2] {
                    // The same row operation on A_{k-1}.
                    Direction::Forward => match (below.row_pivot(s), below.row_pivot(r)) {
                        (Some(c), Some(d)) if c < d => Stray::Right { k: k - 1, r: s, q: c, p: d },
                        _ => return,
                    },
                    // Col(r) += β·Col(s) on A_{k-1}.
                    Direction::Backward => match (col_pivot(below, s), col_pivot(below, r)) {
                        (Some(c), Some(d)) if c != d => Stray::Above { k: k - 1, s: c, r: d, q: r },
                        _ => return,
                    },
                }
            }
        };
        stray = next;
    }
}

/// Row of the last nonzero entry of column `c`; in reversed barcode form
/// this is the unique 1.
fn col_pivot<S: Scalar>(m: &Matrix<S>, c: usize) -> Option<usize> {
    (0..m.rows()).rev().find(|&r| !m.get(r, c).is_zero())
}

fn reduce_last<S: Scalar>(ws: &mut Workspace<S>) {
    let k = ws.matrices.len();
    match ws.directions[k - 1] {
        Direction::Forward => {
            let echelon = ws.matrices[k - 1].rref();
            for op in echelon.ops {
                ws.vertex_op(k, op);
            }
            for (r, &q) in echelon.pivots.iter().enumerate() {
                for p in q + 1..ws.matrices[k - 1].cols() {
                    if !ws.matrices[k - 1].get(r, p).is_zero() {
                        cascade(ws, Stray::Right { k, r, q, p });
                    }
                }
            }
        }
        Direction::Backward => {
            // Column operations on A_k are basis changes at V_k by the inverse.
            let echelon = ws.matrices[k - 1].reversed_column_echelon();
            for op in echelon.ops {
                ws.vertex_op(k, op.inverse());
            }
            let m = &ws.matrices[k - 1];
            let mut strays = Vec::new();
            for q in 0..m.cols() {
                if let Some(r) = col_pivot(m, q) {
                    strays.extend((0..r).filter(|&s| !m.get(s, q).is_zero()).map(|s| (s, r, q)));
                }
            }
            for (s, r, q) in strays {
                cascade(ws, Stray::Above { k, s, r, q });
            }
        }
    }
}

/// Puts a zigzag module in zigzag barcode form.
pub fn comp_pers_zigzag<S: Scalar>(module: &ZigzagModule<S>) -> ReductionResult<S> {
    comp_pers_zigzag_with(module, ReductionOptions::default())
}

pub fn comp_pers_zigzag_with<S: Scalar>(
    module: &ZigzagModule<S>,
    options: ReductionOptions,
) -> ReductionResult<S> {
    let mut ws = Workspace::new(module.dims(), &module.directions(), options);
    for a in module.matrices() {
        ws.append(a);
        reduce_last(&mut ws);
    }
    ws.finish()
}

impl<S: Scalar> BarcodeModule for ZigzagModule<S> {
    type Order = TauOrder;

    fn bar_order(&self) -> TauOrder {
        self.order()
    }

    fn reduce(&self) -> ReductionResult<S> {
        comp_pers_zigzag(self)
    }

    fn canonical(bar: &Barcode, order: &TauOrder) -> Result<Self, CensusError> {
        canonical_zigzag(bar, order.tau())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Fp, Rational};
    use crate::zigzag::{apply_basis_change_zigzag, is_zigzag_barcode_form, ZigzagType};

    fn check<S: Scalar>(module: &ZigzagModule<S>) {
        let result = comp_pers_zigzag(module);
        assert_eq!(apply_basis_change_zigzag(&result.change, module).unwrap(), result.reduced);
        assert!(result.change.is_certified());
        let reduced = module.with_matrices(result.reduced).unwrap();
        assert!(is_zigzag_barcode_form(&reduced), "{reduced:?}");
    }

    #[test]
    fn single_backward_arrow() {
        let tau: ZigzagType = "q".parse().unwrap();
        let m = ZigzagModule::new(vec![2, 2], tau, vec![Matrix::<Rational>::from_ints(&[[1, 1], [0, 1]])]).unwrap();
        check(&m);
    }

    #[test]
    fn all_four_arrow_pairs() {
        for tau in ["ff", "fq", "qf", "qq", "qfq", "fqqf"] {
            let tau: ZigzagType = tau.parse().unwrap();
            let dims = vec![3; tau.len() + 1];
            let matrices = (0..tau.len())
                .map(|i| Matrix::<Fp<7>>::from_ints(&[[1, 2, i as i64], [3, 0, 1], [1, 1, 5]]))
                .collect();
            check(&ZigzagModule::new(dims, tau, matrices).unwrap());
        }
    }
}
