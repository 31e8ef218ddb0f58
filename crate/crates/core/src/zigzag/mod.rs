//! Zigzag modules: type-A quiver representations with arbitrary arrow
//! orientations.

mod orders;
mod reduction;

pub use orders::{
    lex_tau, order_tau, order_tau_star, preceq_tau, strictly_nested_tau, EndpointOrder, TauOrder,
};
pub use reduction::{comp_pers_zigzag, comp_pers_zigzag_with};

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::field::Scalar;
use crate::matrix::Matrix;
use crate::persistence::{
    conjugate, validate_oriented, Barcode, BasisChange, CensusError, Chains, Direction, FormError,
    PersistenceModule, QuiverModule, ShapeError,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("arrow {position} is {found:?}; expected 'f' or 'q'")]
pub struct TypeParseError {
    pub position: usize,
    pub found: char,
}

/// The orientation `τ` of each arrow; arrow `i` joins `V_{i-1}` and `V_i`.
///
/// Written as a string over `f` (forward) and `q` (backward); the empty type
/// may be written `-`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ZigzagType(Vec<Direction>);

impl ZigzagType {
    pub fn new(arrows: Vec<Direction>) -> Self {
        ZigzagType(arrows)
    }

    pub fn forward(length: usize) -> Self {
        ZigzagType(vec![Direction::Forward; length])
    }

    pub fn arrows(&self) -> &[Direction] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_all_forward(&self) -> bool {
        self.0.iter().all(|&d| d == Direction::Forward)
    }

    /// Every type of the given length, in binary counting order.
    pub fn all(length: usize) -> impl Iterator<Item = ZigzagType> {
        (0u64..1 << length).map(move |bits| {
            ZigzagType(
                (0..length)
                    .map(|i| if bits >> i & 1 == 1 { Direction::Backward } else { Direction::Forward })
                    .collect(),
            )
        })
    }
}

impl FromStr for ZigzagType {
    type Err = TypeParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "-" {
            return Ok(ZigzagType(Vec::new()));
        }
        s.chars()
            .enumerate()
            .map(|(i, c)| match c {
                'f' => Ok(Direction::Forward),
                'q' => Ok(Direction::Backward),
                found => Err(TypeParseError { position: i + 1, found }),
            })
            .collect::<Result<_, _>>()
            .map(ZigzagType)
    }
}

impl fmt::Display for ZigzagType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "-");
        }
        for d in &self.0 {
            write!(f, "{}", if *d == Direction::Forward { 'f' } else { 'q' })?;
        }
        Ok(())
    }
}

/// `𝔽^{n_0} ↔ 𝔽^{n_1} ↔ ⋯ ↔ 𝔽^{n_ℓ}`: a forward arrow `i` is an
/// `n_i × n_{i-1}` matrix, a backward one `n_{i-1} × n_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZigzagModule<S> {
    dims: Vec<usize>,
    tau: ZigzagType,
    matrices: Vec<Matrix<S>>,
}

impl<S: Scalar> ZigzagModule<S> {
    pub fn new(dims: Vec<usize>, tau: ZigzagType, matrices: Vec<Matrix<S>>) -> Result<Self, ShapeError> {
        validate_oriented(&dims, tau.arrows(), &matrices)?;
        Ok(ZigzagModule { dims, tau, matrices })
    }

    pub fn zero(dims: Vec<usize>, tau: ZigzagType) -> Result<Self, ShapeError> {
        if dims.len() != tau.len() + 1 {
            return Err(ShapeError::DirectionCount { expected: dims.len().saturating_sub(1), found: tau.len() });
        }
        let matrices = tau
            .arrows()
            .iter()
            .enumerate()
            .map(|(i, &d)| match d {
                Direction::Forward => Matrix::zeros(dims[i + 1], dims[i]),
                Direction::Backward => Matrix::zeros(dims[i], dims[i + 1]),
            })
            .collect();
        Ok(ZigzagModule { dims, tau, matrices })
    }

    pub fn tau(&self) -> &ZigzagType {
        &self.tau
    }

    pub fn into_matrices(self) -> Vec<Matrix<S>> {
        self.matrices
    }

    pub fn order(&self) -> TauOrder {
        TauOrder::new(&self.tau)
    }
}

impl<S: Scalar> From<PersistenceModule<S>> for ZigzagModule<S> {
    fn from(m: PersistenceModule<S>) -> Self {
        let tau = ZigzagType::forward(m.length());
        ZigzagModule {
            dims: m.dims().to_vec(),
            tau,
            matrices: m.into_matrices(),
        }
    }
}

impl<S: Scalar> QuiverModule for ZigzagModule<S> {
    type Scalar = S;

    fn dims(&self) -> &[usize] {
        &self.dims
    }

    fn matrices(&self) -> &[Matrix<S>] {
        &self.matrices
    }

    fn directions(&self) -> Vec<Direction> {
        self.tau.arrows().to_vec()
    }

    fn with_matrices(&self, matrices: Vec<Matrix<S>>) -> Result<Self, ShapeError> {
        ZigzagModule::new(self.dims.clone(), self.tau.clone(), matrices)
    }
}

/// Direction-aware conjugation of the structure matrices by `g`.
pub fn apply_basis_change_zigzag<S: Scalar>(
    g: &BasisChange<S>,
    module: &ZigzagModule<S>,
) -> Result<Vec<Matrix<S>>, ShapeError> {
    conjugate(g, module.tau.arrows(), &module.matrices)
}

/// Forward matrices in barcode form, backward ones in reversed barcode form.
pub fn is_zigzag_barcode_form<S: Scalar>(module: &ZigzagModule<S>) -> bool {
    module.matrices.iter().zip(module.tau.arrows()).all(|(m, d)| match d {
        Direction::Forward => m.is_barcode_form(),
        Direction::Backward => m.is_reversed_barcode_form(),
    })
}

pub fn extract_barcode_zigzag<S: Scalar>(module: &ZigzagModule<S>) -> Result<Barcode, FormError> {
    Ok(Chains::trace(&module.dims, module.tau.arrows(), &module.matrices)?.barcode())
}

/// `⊕ I_τ[i,j]^{d_ij}` in an ordered barcode basis: the live bars at each
/// vertex are listed in ⊴_τ order.
pub fn canonical_zigzag<S: Scalar>(bar: &Barcode, tau: &ZigzagType) -> Result<ZigzagModule<S>, CensusError> {
    let order = TauOrder::new(tau);
    let layout = Chains::canonical(bar, &order)?;
    Ok(ZigzagModule {
        dims: layout.dims().to_vec(),
        tau: tau.clone(),
        matrices: layout.matrices(tau.arrows()),
    })
}
