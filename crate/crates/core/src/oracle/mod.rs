//! Independent checks: rank invariants, morphism-space dimensions, random
//! instances and a verifier for reduction output.

mod hom;
pub mod random;

pub use hom::{
    barcode_via_hom, endomorphism_dimension, hom_dimension, hom_dimension_modules, interval_hom_nonzero,
    interval_representation,
};

use thiserror::Error;

use crate::field::Scalar;
use crate::matrix::Matrix;
use crate::persistence::{Barcode, Chains, Direction, FormError, Interval, PersistenceModule, QuiverModule};
use crate::reduction::ReductionResult;

/// `r(a, b) = rank(A_b ⋯ A_{a+1})` for `a ≤ b`; `r(a, a) = n_a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankTable {
    ranks: Vec<Vec<usize>>,
}

impl RankTable {
    pub fn get(&self, a: usize, b: usize) -> usize {
        self.ranks[a][b - a]
    }

    pub fn length(&self) -> usize {
        self.ranks.len() - 1
    }
}

pub fn rank_table<S: Scalar>(module: &PersistenceModule<S>) -> RankTable {
    let dims = module.dims();
    let ranks = (0..dims.len())
        .map(|a| {
            let mut product = Matrix::<S>::identity(dims[a]);
            let mut row = vec![dims[a]];
            for b in a + 1..dims.len() {
                product = module.matrix(b) * &product;
                row.push(product.rank());
            }
            row
        })
        .collect();
    RankTable { ranks }
}

/// Bar multiplicities by inclusion–exclusion on the rank invariant:
/// `d_ij = r(i,j) − r(i−1,j) − r(i,j+1) + r(i−1,j+1)`, with out-of-range
/// terms zero.
pub fn barcode_via_ranks<S: Scalar>(module: &PersistenceModule<S>) -> Barcode {
    let table = rank_table(module);
    let length = table.length();
    let r = |a: Option<usize>, b: usize| match a {
        Some(a) if b <= length => table.get(a, b) as i64,
        _ => 0,
    };
    let mut out = Barcode::new();
    for bar in Interval::all(length) {
        let (i, j) = (bar.start(), bar.end());
        let before = i.checked_sub(1);
        let d = r(Some(i), j) - r(before, j) - r(Some(i), j + 1) + r(before, j + 1);
        assert!(d >= 0, "negative multiplicity for {bar}");
        out.insert(bar, d as usize);
    }
    out
}

/// What a reduction result can get wrong.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("basis change has {found} components for {expected} spaces")]
    ComponentCount { expected: usize, found: usize },
    #[error("basis change at V_{vertex} has the wrong size")]
    ComponentShape { vertex: usize },
    #[error("basis change at V_{vertex} does not match its inverse")]
    NotInvertible { vertex: usize },
    #[error("conjugating A_{index} does not give the reported matrix")]
    Conjugation { index: usize },
    #[error(transparent)]
    Form(#[from] FormError),
}

/// Checks a reduction result from scratch and returns the barcode it shows.
pub fn verify_reduction<M: QuiverModule>(
    original: &M,
    result: &ReductionResult<M::Scalar>,
) -> Result<Barcode, Violation> {
    let dims = original.dims();
    let g = &result.change;
    if g.len() != dims.len() {
        return Err(Violation::ComponentCount { expected: dims.len(), found: g.len() });
    }
    for (vertex, &n) in dims.iter().enumerate() {
        let (c, inv) = (g.component(vertex), g.inverse_component(vertex));
        if c.shape() != (n, n) || inv.shape() != (n, n) {
            return Err(Violation::ComponentShape { vertex });
        }
        if c * inv != Matrix::identity(n) {
            return Err(Violation::NotInvertible { vertex });
        }
    }
    let directions = original.directions();
    for (i, (a, &dir)) in original.matrices().iter().zip(&directions).enumerate() {
        let (row, col) = match dir {
            Direction::Forward => (i + 1, i),
            Direction::Backward => (i, i + 1),
        };
        let expected = &(g.component(row) * a) * g.inverse_component(col);
        if result.reduced.get(i) != Some(&expected) {
            return Err(Violation::Conjugation { index: i + 1 });
        }
    }
    let chains = Chains::trace(dims, &directions, &result.reduced)?;
    let bar = chains.barcode();
    bar.check_census(dims).map_err(FormError::from)?;
    Ok(bar)
}
