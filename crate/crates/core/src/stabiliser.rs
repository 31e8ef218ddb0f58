//! The stabiliser of a module in ordered barcode form.
//!
//! An element is determined by one block `G_{a,b}` of size `d_a × d_b` for
//! every pair of bars with `a ⪯ b`: at each vertex where both bars live, the
//! rows of copies of `a` meet the columns of copies of `b` in that block, and
//! every other entry is zero. Diagonal blocks must be invertible.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::field::Scalar;
use crate::matrix::Matrix;
use crate::persistence::{
    BarOrder, Barcode, BasisChange, CensusError, Chains, Interval, QuiverModule, ShapeError,
};
use crate::zigzag::{TauOrder, ZigzagType};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StabiliserError {
    #[error(transparent)]
    Census(#[from] CensusError),
    #[error(transparent)]
    Shape(#[from] ShapeError),
    #[error("{row} ⋠ {col}, so that block must vanish")]
    NotRelated { row: Interval, col: Interval },
    #[error("block ({row}, {col}) should be {expected:?}, found {found:?}")]
    BlockShape { row: Interval, col: Interval, expected: (usize, usize), found: (usize, usize) },
    #[error("diagonal block of {bar} is singular")]
    SingularDiagonal { bar: Interval },
    #[error("{bar} is not a bar of this barcode")]
    UnknownBar { bar: Interval },
    #[error("the element does not fix the module")]
    NotStabiliser,
    #[error("blocks and layout describe different barcodes")]
    ContextMismatch,
    #[error("component at V_{vertex} is not assembled from constant blocks")]
    Inconsistent { vertex: usize },
}

/// Block data of an endomorphism of `⊕ I[a]^{d_a}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabiliserBlocks<S> {
    mults: BTreeMap<Interval, usize>,
    blocks: BTreeMap<(Interval, Interval), Matrix<S>>,
}

impl<S: Scalar> StabiliserBlocks<S> {
    /// The identity element.
    pub fn identity<O: BarOrder>(bar: &Barcode, order: &O) -> Self {
        let mut blocks = Self::zero(bar, order);
        for (a, d) in bar.iter() {
            blocks.blocks.insert((a, a), Matrix::identity(d));
        }
        blocks
    }

    /// All blocks zero: an endomorphism, not a group element.
    pub fn zero<O: BarOrder>(bar: &Barcode, order: &O) -> Self {
        let mut blocks = BTreeMap::new();
        for (a, da) in bar.iter() {
            for (b, db) in bar.iter() {
                if order.preceq(a, b) {
                    blocks.insert((a, b), Matrix::zeros(da, db));
                }
            }
        }
        StabiliserBlocks { mults: bar.iter().collect(), blocks }
    }

    pub fn barcode(&self) -> Barcode {
        self.mults.iter().map(|(&b, &d)| (b, d)).collect()
    }

    /// The block `G_{row,col}`, if `row ⪯ col`.
    pub fn get(&self, row: Interval, col: Interval) -> Option<&Matrix<S>> {
        self.blocks.get(&(row, col))
    }

    pub fn set(&mut self, row: Interval, col: Interval, block: Matrix<S>) -> Result<(), StabiliserError> {
        let expected = (self.multiplicity(row)?, self.multiplicity(col)?);
        let slot = self.blocks.get_mut(&(row, col)).ok_or(StabiliserError::NotRelated { row, col })?;
        if block.shape() != expected {
            return Err(StabiliserError::BlockShape { row, col, expected, found: block.shape() });
        }
        *slot = block;
        Ok(())
    }

    /// Pairs `(a, b)` with `a ⪯ b`, the free parameters.
    pub fn pairs(&self) -> impl Iterator<Item = (Interval, Interval)> + '_ {
        self.blocks.keys().copied()
    }

    /// Number of free scalars, `Σ_{a ⪯ b} d_a·d_b`.
    pub fn parameter_count(&self) -> usize {
        self.blocks.values().map(|m| m.rows() * m.cols()).sum()
    }

    pub fn is_invertible(&self) -> bool {
        self.mults.keys().all(|&a| self.blocks[&(a, a)].is_invertible())
    }

    fn multiplicity(&self, bar: Interval) -> Result<usize, StabiliserError> {
        self.mults.get(&bar).copied().ok_or(StabiliserError::UnknownBar { bar })
    }

    /// One matrix per vertex, in the canonical layout of the barcode.
    pub fn to_matrices<O: BarOrder>(&self, order: &O) -> Result<Vec<Matrix<S>>, StabiliserError> {
        let layout = Chains::canonical(&self.barcode(), order)?;
        Ok(blocks_on_layout(self, &layout))
    }

    /// One matrix per vertex, placing each block at the chain positions of
    /// `layout`. Not necessarily invertible.
    pub fn to_matrices_on(&self, layout: &Chains) -> Result<Vec<Matrix<S>>, StabiliserError> {
        if layout.barcode() != self.barcode() {
            return Err(StabiliserError::ContextMismatch);
        }
        Ok(blocks_on_layout(self, layout))
    }
}

fn blocks_on_layout<S: Scalar>(blocks: &StabiliserBlocks<S>, layout: &Chains) -> Vec<Matrix<S>> {
    let mut out: Vec<Matrix<S>> = layout.dims().iter().map(|&n| Matrix::zeros(n, n)).collect();
    for (&(a, b), block) in &blocks.blocks {
        let Some(overlap) = a.intersection(b) else { continue };
        for k in overlap.start()..=overlap.end() {
            let rows = layout.positions_at(a, k);
            let cols = layout.positions_at(b, k);
            for (m, &u) in rows.iter().enumerate() {
                for (n, &v) in cols.iter().enumerate() {
                    out[k].set(u, v, block.get(m, n).clone());
                }
            }
        }
    }
    out
}

/// The group element with the given blocks, laid out along the chains of
/// a module in barcode form.
pub fn blocks_to_element<S: Scalar>(
    blocks: &StabiliserBlocks<S>,
    layout: &Chains,
) -> Result<BasisChange<S>, StabiliserError> {
    if let Some(&bar) = blocks.mults.keys().find(|&&a| !blocks.blocks[&(a, a)].is_invertible()) {
        return Err(StabiliserError::SingularDiagonal { bar });
    }
    let matrices = blocks.to_matrices_on(layout)?;
    Ok(BasisChange::new(matrices).expect("invertible diagonal blocks give invertible components"))
}

/// [`blocks_to_element`] for the canonical layout under `order`.
pub fn blocks_to_element_canonical<S: Scalar, O: BarOrder>(
    blocks: &StabiliserBlocks<S>,
    order: &O,
) -> Result<BasisChange<S>, StabiliserError> {
    blocks_to_element(blocks, &Chains::canonical(&blocks.barcode(), order)?)
}

/// Reads the blocks back off a stabiliser element, after checking that it
/// fixes the module traced by `layout` and that every entry outside the
/// admissible blocks vanishes.
pub fn element_to_blocks<S: Scalar, O: BarOrder>(
    g: &BasisChange<S>,
    layout: &Chains,
    order: &O,
) -> Result<StabiliserBlocks<S>, StabiliserError> {
    let directions = order.directions();
    let module = crate::zigzag::ZigzagModule::new(
        layout.dims().to_vec(),
        ZigzagType::new(directions.clone()),
        layout.matrices(&directions),
    )?;
    if !module.is_fixed_by(g)? {
        return Err(StabiliserError::NotStabiliser);
    }
    let bar = layout.barcode();
    let mut blocks = StabiliserBlocks::zero(&bar, order);
    for (a, _) in bar.iter() {
        for (b, _) in bar.iter() {
            let Some(overlap) = a.intersection(b) else { continue };
            let k = overlap.start();
            let read = g.component(k).select(&layout.positions_at(a, k), &layout.positions_at(b, k));
            if order.preceq(a, b) {
                blocks.set(a, b, read)?;
            } else if !read.is_zero() {
                return Err(StabiliserError::NotRelated { row: a, col: b });
            }
        }
    }
    let rebuilt = blocks_on_layout(&blocks, layout);
    if let Some(vertex) = (0..rebuilt.len()).find(|&k| &rebuilt[k] != g.component(k)) {
        return Err(StabiliserError::Inconsistent { vertex });
    }
    Ok(blocks)
}

/// Product of two stabiliser elements in block form:
/// `(GH)_{a,b} = Σ_{a ⪯ c ⪯ b} G_{a,c}·H_{c,b}`.
pub fn blocks_multiply<S: Scalar>(
    g: &StabiliserBlocks<S>,
    h: &StabiliserBlocks<S>,
) -> Result<StabiliserBlocks<S>, StabiliserError> {
    if g.mults != h.mults || g.blocks.len() != h.blocks.len() {
        return Err(StabiliserError::ContextMismatch);
    }
    let mut out = g.clone();
    for (&(a, b), slot) in out.blocks.iter_mut() {
        let mut sum: Matrix<S> = Matrix::zeros(slot.rows(), slot.cols());
        for &c in g.mults.keys() {
            if let (Some(x), Some(y)) = (g.blocks.get(&(a, c)), h.blocks.get(&(c, b))) {
                let term = x * y;
                for i in 0..sum.rows() {
                    for j in 0..sum.cols() {
                        let v = sum.get(i, j).clone() + term.get(i, j).clone();
                        sum.set(i, j, v);
                    }
                }
            }
        }
        *slot = sum;
    }
    Ok(out)
}

/// Whether `g` fixes the module.
pub fn is_stabiliser<M: QuiverModule>(g: &BasisChange<M::Scalar>, module: &M) -> bool {
    module.is_fixed_by(g).unwrap_or(false)
}

/// `Σ_{a ⪯ b} d_a·d_b`.
pub fn stab_dimension<O: BarOrder>(bar: &Barcode, order: &O) -> usize {
    bar.iter()
        .flat_map(|(a, da)| bar.iter().filter(move |&(b, _)| order.preceq(a, b)).map(move |(_, db)| da * db))
        .sum()
}

pub fn stab_dimension_zigzag(bar: &Barcode, tau: &ZigzagType) -> usize {
    stab_dimension(bar, &TauOrder::new(tau))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Fp, Rational};
    use crate::oracle::{endomorphism_dimension, random};
    use crate::persistence::StandardOrder;
    use crate::zigzag::canonical_zigzag;

    fn bar(pairs: &[((usize, usize), usize)]) -> Barcode {
        pairs.iter().map(|&((s, e), d)| (Interval::of(s, e), d)).collect()
    }

    #[test]
    fn dimension_of_two_overlapping_bars() {
        // [0,1] ⪯ [1,2] but not conversely; both are self-related.
        let b = bar(&[((0, 1), 1), ((1, 2), 2)]);
        assert_eq!(stab_dimension(&b, &StandardOrder::new(2)), 1 + 4 + 2);
    }

    #[test]
    fn dimension_matches_endomorphisms() {
        let b = bar(&[((0, 3), 2), ((1, 2), 1), ((0, 1), 1), ((2, 3), 2), ((3, 3), 1)]);
        for tau in ZigzagType::all(3) {
            let m = canonical_zigzag::<Fp<2>>(&b, &tau).unwrap();
            assert_eq!(stab_dimension_zigzag(&b, &tau), endomorphism_dimension(&m), "{tau}");
        }
    }

    #[test]
    fn blocks_round_trip() {
        let b = bar(&[((0, 2), 2), ((1, 2), 1), ((1, 3), 1)]);
        let order = StandardOrder::new(3);
        let mut blocks = StabiliserBlocks::<Rational>::identity(&b, &order);
        blocks.set(Interval::of(0, 2), Interval::of(0, 2), Matrix::from_ints(&[[2, 1], [0, 1]])).unwrap();
        blocks.set(Interval::of(0, 2), Interval::of(1, 3), Matrix::from_ints(&[[3], [-1]])).unwrap();
        let layout = Chains::canonical(&b, &order).unwrap();
        let g = blocks_to_element(&blocks, &layout).unwrap();
        assert_eq!(element_to_blocks(&g, &layout, &order).unwrap(), blocks);
        assert_eq!(
            blocks.set(Interval::of(1, 3), Interval::of(0, 2), Matrix::from_ints(&[[1, 1]])),
            Err(StabiliserError::NotRelated { row: Interval::of(1, 3), col: Interval::of(0, 2) })
        );
    }

    #[test]
    fn singular_diagonal_is_rejected() {
        let b = bar(&[((0, 1), 2)]);
        let order = StandardOrder::new(1);
        let mut blocks = StabiliserBlocks::<Rational>::identity(&b, &order);
        blocks.set(Interval::of(0, 1), Interval::of(0, 1), Matrix::from_ints(&[[1, 1], [1, 1]])).unwrap();
        assert!(matches!(blocks_to_element_canonical(&blocks, &order), Err(StabiliserError::SingularDiagonal { .. })));
    }

    #[test]
    fn non_stabiliser_is_rejected() {
        let b = bar(&[((0, 1), 1), ((1, 1), 1)]);
        let order = StandardOrder::new(1);
        // Mixing the dying bar into the surviving one at V_1 alone breaks A_1.
        let g = BasisChange::<Rational>::new(vec![
            Matrix::identity(1),
            Matrix::from_ints(&[[1, 0], [1, 1]]),
        ])
        .unwrap();
        let layout = Chains::canonical(&b, &order).unwrap();
        assert_eq!(element_to_blocks(&g, &layout, &order), Err(StabiliserError::NotStabiliser));
    }

    #[test]
    fn drawn_example_with_traced_layout() {
        let m = crate::persistence::PersistenceModule::<Rational>::from_matrices(
            2,
            vec![
                Matrix::from_ints(&[[1, 0], [0, 1], [0, 0]]),
                Matrix::from_ints(&[[1, 0, 0], [0, 0, 1]]),
                Matrix::identity(2),
            ],
        )
        .unwrap();
        let scale = BasisChange::new(vec![
            Matrix::from_ints(&[[1, 0], [0, 2]]),
            Matrix::from_ints(&[[1, 0, 0], [0, 2, 0], [0, 0, 1]]),
            Matrix::identity(2),
            Matrix::identity(2),
        ])
        .unwrap();
        assert!(is_stabiliser(&scale, &m));
        let shear = BasisChange::new(vec![
            Matrix::from_ints(&[[1, 1], [0, 1]]),
            Matrix::identity(3),
            Matrix::identity(2),
            Matrix::identity(2),
        ])
        .unwrap();
        assert!(!is_stabiliser(&shear, &m));

        let order = StandardOrder::new(3);
        let layout = Chains::trace(m.dims(), &m.directions(), m.matrices()).unwrap();
        let blocks = element_to_blocks(&scale, &layout, &order).unwrap();
        assert_eq!(blocks.get(Interval::of(0, 1), Interval::of(0, 1)), Some(&Matrix::from_ints(&[[2]])));
        assert_eq!(blocks_to_element(&blocks, &layout).unwrap(), scale);
        assert_eq!(element_to_blocks(&shear, &layout, &order), Err(StabiliserError::NotStabiliser));
    }

    fn filled(b: &Barcode, order: &TauOrder, seed: u64) -> StabiliserBlocks<Fp<7>> {
        let mut rng = random::rng(seed);
        let mut blocks = StabiliserBlocks::identity(b, order);
        for (r, c) in blocks.pairs().collect::<Vec<_>>() {
            let (rows, cols) = blocks.get(r, c).unwrap().shape();
            if r != c {
                blocks.set(r, c, random::random_matrix(&mut rng, rows, cols, &random::Uniform)).unwrap();
            }
        }
        blocks
    }

    #[test]
    fn multiplication_matches_matrices() {
        let b = bar(&[((0, 2), 1), ((1, 2), 2), ((1, 1), 1), ((2, 2), 1), ((0, 1), 1)]);
        for tau in ZigzagType::all(2) {
            let order = TauOrder::new(&tau);
            let (g, h) = (filled(&b, &order, 1), filled(&b, &order, 2));
            let product = blocks_multiply(&g, &h).unwrap();
            let gm = g.to_matrices(&order).unwrap();
            let hm = h.to_matrices(&order).unwrap();
            let pm = product.to_matrices(&order).unwrap();
            for k in 0..gm.len() {
                assert_eq!(&gm[k] * &hm[k], pm[k], "{tau} at {k}");
            }
        }
    }
}
