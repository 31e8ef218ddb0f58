//! Pivot chains: the basis vectors of a barcode-form module grouped into
//! the interval summands they span.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::field::Scalar;
use crate::matrix::Matrix;

use super::{arrow_spaces, Barcode, BarOrder, CensusError, Direction, Interval};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormError {
    #[error("A_{index} is not in barcode form")]
    NotBarcodeForm { index: usize },
    #[error("A_{index} is not in reversed barcode form")]
    NotReversedForm { index: usize },
    #[error(transparent)]
    Census(#[from] CensusError),
}

/// The basis index of each summand at every vertex it lives on.
///
/// `instances(bar)[m][k - bar.start()]` is the position, inside the basis of
/// `V_k`, of the `m`-th copy of `bar`. Copies are numbered by their position
/// at the starting vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chains {
    dims: Vec<usize>,
    by_class: BTreeMap<Interval, Vec<Vec<usize>>>,
}

impl Chains {
    /// Follows the pivot maps of a module whose forward matrices are in
    /// barcode form and backward matrices in reversed barcode form.
    pub fn trace<S: Scalar>(
        dims: &[usize],
        directions: &[Direction],
        matrices: &[Matrix<S>],
    ) -> Result<Self, FormError> {
        // next[k][x] = index at vertex k+1 linked to index x at vertex k
        let mut next: Vec<Vec<Option<usize>>> = Vec::with_capacity(matrices.len());
        let mut has_prev: Vec<Vec<bool>> = dims.iter().map(|&n| vec![false; n]).collect();
        for (i, (a, &dir)) in matrices.iter().zip(directions).enumerate() {
            let index = i + 1;
            let mut links = vec![None; dims[i]];
            match dir {
                Direction::Forward => {
                    let profile = a.barcode_profile().ok_or(FormError::NotBarcodeForm { index })?;
                    for (y, &x) in profile.pivot_cols.iter().enumerate() {
                        links[x] = Some(y);
                        has_prev[index][y] = true;
                    }
                }
                Direction::Backward => {
                    let profile =
                        a.reversed_barcode_profile().ok_or(FormError::NotReversedForm { index })?;
                    let offset = a.cols() - profile.rank();
                    for (j, &x) in profile.pivot_rows.iter().enumerate() {
                        links[x] = Some(offset + j);
                        has_prev[index][offset + j] = true;
                    }
                }
            }
            next.push(links);
        }
        let mut by_class: BTreeMap<Interval, Vec<Vec<usize>>> = BTreeMap::new();
        for (start, &n) in dims.iter().enumerate() {
            for x in (0..n).filter(|&x| !has_prev[start][x]) {
                let mut positions = vec![x];
                let mut k = start;
                while let Some(Some(y)) = next.get(k).map(|links| links[*positions.last().unwrap()]) {
                    positions.push(y);
                    k += 1;
                }
                let bar = Interval::new(start, k).expect("chains run forward");
                by_class.entry(bar).or_default().push(positions);
            }
        }
        Ok(Chains {
            dims: dims.to_vec(),
            by_class,
        })
    }

    /// The layout of an ordered barcode basis: at each vertex the live
    /// summands are listed by `order`, copies of one bar consecutively.
    pub fn canonical<O: BarOrder>(bar: &Barcode, order: &O) -> Result<Self, CensusError> {
        let length = order.length();
        if let Some(b) = bar.classes().find(|b| b.end() > length) {
            return Err(CensusError::OutOfRange { bar: b, length });
        }
        let mut classes: Vec<Interval> = bar.classes().collect();
        order.sort(&mut classes);
        let mut dims = vec![0; length + 1];
        let mut by_class: BTreeMap<Interval, Vec<Vec<usize>>> = BTreeMap::new();
        for class in classes {
            let copies = (0..bar.multiplicity(class))
                .map(|_| {
                    (class.start()..=class.end())
                        .map(|k| {
                            dims[k] += 1;
                            dims[k] - 1
                        })
                        .collect()
                })
                .collect();
            by_class.insert(class, copies);
        }
        Ok(Chains { dims, by_class })
    }

    /// Structure matrices joining consecutive positions of every chain.
    pub fn matrices<S: Scalar>(&self, directions: &[Direction]) -> Vec<Matrix<S>> {
        let mut out: Vec<Matrix<S>> = directions
            .iter()
            .enumerate()
            .map(|(i, &dir)| {
                let (r, c) = arrow_spaces(i + 1, dir);
                Matrix::zeros(self.dims[r], self.dims[c])
            })
            .collect();
        for (bar, copies) in &self.by_class {
            for positions in copies {
                for k in bar.start() + 1..=bar.end() {
                    let prev = positions[k - 1 - bar.start()];
                    let cur = positions[k - bar.start()];
                    match directions[k - 1] {
                        Direction::Forward => out[k - 1].set(cur, prev, S::one()),
                        Direction::Backward => out[k - 1].set(prev, cur, S::one()),
                    }
                }
            }
        }
        out
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn barcode(&self) -> Barcode {
        self.by_class.iter().map(|(&bar, copies)| (bar, copies.len())).collect()
    }

    pub fn classes(&self) -> impl Iterator<Item = Interval> + '_ {
        self.by_class.keys().copied()
    }

    pub fn instances(&self, bar: Interval) -> &[Vec<usize>] {
        self.by_class.get(&bar).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Positions at vertex `k` of every copy of `bar`.
    pub fn positions_at(&self, bar: Interval, k: usize) -> Vec<usize> {
        self.instances(bar).iter().map(|p| p[k - bar.start()]).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rational;
    use crate::persistence::StandardOrder;

    #[test]
    fn traces_a_three_bar_module() {
        let a: Vec<Matrix<Rational>> = vec![
            Matrix::from_ints(&[[1, 0], [0, 1], [0, 0]]),
            Matrix::from_ints(&[[1, 0, 0], [0, 0, 1]]),
            Matrix::from_ints(&[[1, 0], [0, 1]]),
        ];
        let chains = Chains::trace(&[2, 3, 2, 2], &[Direction::Forward; 3], &a).unwrap();
        let expected: Barcode = [(Interval::of(0, 3), 1), (Interval::of(0, 1), 1), (Interval::of(1, 3), 1)]
            .into_iter()
            .collect();
        assert_eq!(chains.barcode(), expected);
        assert_eq!(chains.instances(Interval::of(0, 3)), &[vec![0, 0, 0, 0]]);
        assert_eq!(chains.instances(Interval::of(1, 3)), &[vec![2, 1, 1]]);
    }

    #[test]
    fn rejects_non_barcode_form() {
        let a: Vec<Matrix<Rational>> = vec![Matrix::from_ints(&[[0, 1], [1, 0]])];
        assert_eq!(
            Chains::trace(&[2, 2], &[Direction::Forward], &a),
            Err(FormError::NotBarcodeForm { index: 1 })
        );
    }

    #[test]
    fn canonical_layout_round_trips() {
        let bar: Barcode = [(Interval::of(0, 2), 2), (Interval::of(1, 1), 1), (Interval::of(2, 3), 1)]
            .into_iter()
            .collect();
        let order = StandardOrder::new(3);
        let layout = Chains::canonical(&bar, &order).unwrap();
        assert_eq!(layout.dims(), &[2, 3, 3, 1]);
        let m: Vec<Matrix<Rational>> = layout.matrices(&order.directions());
        let traced = Chains::trace(layout.dims(), &order.directions(), &m).unwrap();
        assert_eq!(traced, layout);
    }
}
