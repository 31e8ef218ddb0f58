//! Persistence modules as matrix sequences, bars and their orders.

mod barcode;
mod basis;
mod chains;
pub mod interval;
mod module;
mod order;

pub use barcode::{Barcode, CensusError};
pub use basis::{BasisChange, BasisChangeError};
pub use chains::{Chains, FormError};
pub use interval::{lex_leq, preceq, strictly_nested, Interval, IntervalError};
pub use module::{
    apply_basis_change, conjugate, validate, validate_oriented, Direction, PersistenceModule,
    QuiverModule, ShapeError,
};
pub use order::{BarOrder, StandardOrder};

pub(crate) use module::arrow_spaces;

use crate::field::Scalar;

/// The module `⊕ I[i,j]^{d_ij}` written in an ordered barcode basis: at every
/// vertex the live bars are listed in ⊴ order, equal bars consecutively.
pub fn canonical_matrices<S: Scalar>(
    bar: &Barcode,
    length: usize,
) -> Result<PersistenceModule<S>, CensusError> {
    let order = StandardOrder::new(length);
    let layout = Chains::canonical(bar, &order)?;
    Ok(PersistenceModule::new(layout.dims().to_vec(), layout.matrices(&order.directions()))
        .expect("canonical layout has consistent shapes"))
}

/// Reads the barcode off a module in barcode form.
pub fn extract_barcode<S: Scalar>(module: &PersistenceModule<S>) -> Result<Barcode, FormError> {
    Ok(Chains::trace(module.dims(), &module.directions(), module.matrices())?.barcode())
}
