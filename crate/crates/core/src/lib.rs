pub mod field;
pub mod ladder;
pub mod matrix;
pub mod oracle;
pub mod persistence;
pub mod reduction;
pub mod stabiliser;
pub mod zigzag;

pub use field::{Fp, ModP, Rational, Scalar};
pub use matrix::Matrix;

pub type F2 = Fp<2>;
pub type F3 = Fp<3>;
pub type F5 = Fp<5>;
pub type F7 = Fp<7>;
pub type Q = Rational;
