//! Exact scalar fields.
//!
//! Every algorithm in this crate is generic over [`Scalar`], a field whose
//! zero test is exact. Three implementations ship with the crate:
//!
//! * [`Fp<P>`]: the prime field 𝔽_p with the modulus fixed at compile time,
//! * [`ModP`]: 𝔽_p with the modulus chosen at runtime (used by the CLI),
//! * [`Rational`]: arbitrary precision rationals, always kept in lowest terms.
//!
//! Floating point types are deliberately not scalars: pivot detection needs
//! `x == 0` to be decidable.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
pub use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("{0} is not a prime below 2^31")]
    NotPrime(u64),
    #[error("denominator is zero")]
    ZeroDenominator,
    #[error("scalars from different fields were combined ({0} vs {1})")]
    ModulusMismatch(u32, u32),
}

/// An element of an exact field.
pub trait Scalar:
    Clone
    + PartialEq
    + Eq
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// Multiplicative inverse, `None` for zero.
    fn inverse(&self) -> Option<Self>;

    /// Image of an integer under the canonical ring map ℤ → 𝔽.
    fn from_i64(value: i64) -> Self;

    fn try_inverse(&self) -> Result<Self, FieldError> {
        self.inverse().ok_or(FieldError::ZeroInverse)
    }

    fn try_div(&self, rhs: &Self) -> Result<Self, FieldError> {
        Ok(self.clone() * rhs.try_inverse()?)
    }
}

pub(crate) const fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn mod_inverse(value: u32, modulus: u32) -> Option<u32> {
    if value == 0 {
        return None;
    }
    let (mut old_r, mut r) = (value as i64, modulus as i64);
    let (mut old_s, mut s) = (1i64, 0i64);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(modulus as i64) as u32)
}

#[inline]
fn reduce(value: i64, modulus: u32) -> u32 {
    value.rem_euclid(modulus as i64) as u32
}

#[inline]
fn mul_mod(a: u32, b: u32, modulus: u32) -> u32 {
    ((a as u64 * b as u64) % modulus as u64) as u32
}

#[inline]
fn add_mod(a: u32, b: u32, modulus: u32) -> u32 {
    ((a as u64 + b as u64) % modulus as u64) as u32
}

#[inline]
fn neg_mod(a: u32, modulus: u32) -> u32 {
    if a == 0 {
        0
    } else {
        modulus - a
    }
}

// ---------------------------------------------------------------------------
// Fp<P>

/// Element of the prime field 𝔽_P. Using a composite `P` is a compile error.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Fp<const P: u32>(u32);

impl<const P: u32> Fp<P> {
    const PRIME: () = assert!(is_prime(P as u64) && P < (1 << 31), "Fp modulus must be a prime below 2^31");

    pub fn new(value: i64) -> Self {
        #[allow(clippy::let_unit_value)]
        let () = Self::PRIME;
        Fp(reduce(value, P))
    }

    /// Canonical representative in `0..P`.
    pub fn value(self) -> u32 {
        self.0
    }

    pub const fn modulus() -> u32 {
        P
    }
}

impl<const P: u32> fmt::Debug for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u32> fmt::Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u32> Add for Fp<P> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Fp(add_mod(self.0, rhs.0, P))
    }
}

impl<const P: u32> Sub for Fp<P> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Fp(add_mod(self.0, neg_mod(rhs.0, P), P))
    }
}

impl<const P: u32> Mul for Fp<P> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Fp(mul_mod(self.0, rhs.0, P))
    }
}

impl<const P: u32> Neg for Fp<P> {
    type Output = Self;
    fn neg(self) -> Self {
        Fp(neg_mod(self.0, P))
    }
}

impl<const P: u32> Zero for Fp<P> {
    fn zero() -> Self {
        Fp::new(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl<const P: u32> One for Fp<P> {
    fn one() -> Self {
        Fp::new(1)
    }
}

impl<const P: u32> Scalar for Fp<P> {
    fn inverse(&self) -> Option<Self> {
        mod_inverse(self.0, P).map(Fp)
    }

    fn from_i64(value: i64) -> Self {
        Fp::new(value)
    }
}

// ---------------------------------------------------------------------------
// ModP

#[derive(Clone, Copy, Debug)]
enum Residue {
    /// An integer not yet attached to a field; produced by `zero()`, `one()`
    /// and `from_i64`, and bound to a modulus on first contact with a bound
    /// element.
    Free(i64),
    Bound { value: u32, modulus: u32 },
}

/// Element of 𝔽_p where `p` is only known at runtime.
///
/// `ModP::zero()` and `ModP::one()` cannot know the modulus, so integers stay
/// unbound until they meet an element created with [`ModP::new`]. Combining
/// elements bound to different moduli panics.
#[derive(Clone, Copy, Debug)]
pub struct ModP(Residue);

impl ModP {
    pub fn new(value: i64, modulus: u32) -> Result<Self, FieldError> {
        if !is_prime(modulus as u64) || modulus >= (1 << 31) {
            return Err(FieldError::NotPrime(modulus as u64));
        }
        Ok(ModP(Residue::Bound {
            value: reduce(value, modulus),
            modulus,
        }))
    }

    /// The modulus, or `None` for an unbound integer.
    pub fn modulus(&self) -> Option<u32> {
        match self.0 {
            Residue::Free(_) => None,
            Residue::Bound { modulus, .. } => Some(modulus),
        }
    }

    /// Representative in `0..p` once bound; the raw integer otherwise.
    pub fn value(&self) -> i64 {
        match self.0 {
            Residue::Free(v) => v,
            Residue::Bound { value, .. } => value as i64,
        }
    }

    fn bind(&self, modulus: u32) -> u32 {
        match self.0 {
            Residue::Free(v) => reduce(v, modulus),
            Residue::Bound { value, modulus: m } => {
                assert_eq!(m, modulus, "{}", FieldError::ModulusMismatch(m, modulus));
                value
            }
        }
    }

    fn combine(
        self,
        rhs: Self,
        free: impl Fn(i64, i64) -> Option<i64>,
        bound: impl Fn(u32, u32, u32) -> u32,
    ) -> Self {
        match (self.0, rhs.0) {
            (Residue::Free(a), Residue::Free(b)) => {
                ModP(Residue::Free(free(a, b).expect("unbound integer overflow")))
            }
            (Residue::Bound { modulus, .. }, _) | (_, Residue::Bound { modulus, .. }) => {
                let value = bound(self.bind(modulus), rhs.bind(modulus), modulus);
                ModP(Residue::Bound { value, modulus })
            }
        }
    }
}

impl PartialEq for ModP {
    fn eq(&self, other: &Self) -> bool {
        match (self.0, other.0) {
            (Residue::Free(a), Residue::Free(b)) => a == b,
            (Residue::Free(a), Residue::Bound { value, modulus })
            | (Residue::Bound { value, modulus }, Residue::Free(a)) => reduce(a, modulus) == value,
            (Residue::Bound { value: a, modulus: p }, Residue::Bound { value: b, modulus: q }) => {
                p == q && a == b
            }
        }
    }
}

impl Eq for ModP {}

impl fmt::Display for ModP {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

impl Add for ModP {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.combine(rhs, i64::checked_add, add_mod)
    }
}

impl Sub for ModP {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.combine(rhs, i64::checked_sub, |a, b, p| add_mod(a, neg_mod(b, p), p))
    }
}

impl Mul for ModP {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.combine(rhs, i64::checked_mul, mul_mod)
    }
}

impl Neg for ModP {
    type Output = Self;
    fn neg(self) -> Self {
        match self.0 {
            Residue::Free(v) => ModP(Residue::Free(-v)),
            Residue::Bound { value, modulus } => ModP(Residue::Bound {
                value: neg_mod(value, modulus),
                modulus,
            }),
        }
    }
}

impl Zero for ModP {
    fn zero() -> Self {
        ModP(Residue::Free(0))
    }
    fn is_zero(&self) -> bool {
        self.value() == 0
    }
}

impl One for ModP {
    fn one() -> Self {
        ModP(Residue::Free(1))
    }
}

impl Scalar for ModP {
    /// Unbound integers other than ±1 have no inverse until a modulus is known.
    fn inverse(&self) -> Option<Self> {
        match self.0 {
            Residue::Free(v) if v == 1 || v == -1 => Some(*self),
            Residue::Free(_) => None,
            Residue::Bound { value, modulus } => {
                mod_inverse(value, modulus).map(|value| ModP(Residue::Bound { value, modulus }))
            }
        }
    }

    fn from_i64(value: i64) -> Self {
        ModP(Residue::Free(value))
    }
}

// ---------------------------------------------------------------------------
// Rationals

/// Exact rationals; `num_rational` keeps them reduced with positive denominator.
pub type Rational = BigRational;

impl Scalar for BigRational {
    fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn from_i64(value: i64) -> Self {
        BigRational::from_integer(BigInt::from(value))
    }
}

/// Builds `numer/denom` in lowest terms.
pub fn rational(numer: i64, denom: i64) -> Result<Rational, FieldError> {
    if denom == 0 {
        return Err(FieldError::ZeroDenominator);
    }
    Ok(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn check_axioms<S: Scalar>(a: S, b: S, c: S) {
        assert_eq!(a.clone() + b.clone(), b.clone() + a.clone());
        assert_eq!(a.clone() * b.clone(), b.clone() * a.clone());
        assert_eq!((a.clone() + b.clone()) + c.clone(), a.clone() + (b.clone() + c.clone()));
        assert_eq!((a.clone() * b.clone()) * c.clone(), a.clone() * (b.clone() * c.clone()));
        assert_eq!(
            a.clone() * (b.clone() + c.clone()),
            a.clone() * b.clone() + a.clone() * c.clone()
        );
        assert_eq!(a.clone() + S::zero(), a);
        assert_eq!(a.clone() * S::one(), a);
        assert!((a.clone() + (-a.clone())).is_zero());
        assert_eq!(a.clone() - b.clone(), a.clone() + (-b.clone()));
        match a.inverse() {
            Some(inv) => assert_eq!(a * inv, S::one()),
            None => assert!(a.is_zero()),
        }
    }

    #[test]
    fn prime_field_axioms() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let [a, b, c] = [(); 3].map(|_| rng.gen_range(-20i64..20));
            check_axioms(Fp::<2>::new(a), Fp::<2>::new(b), Fp::<2>::new(c));
            check_axioms(Fp::<5>::new(a), Fp::<5>::new(b), Fp::<5>::new(c));
            check_axioms(Fp::<7>::new(a), Fp::<7>::new(b), Fp::<7>::new(c));
        }
    }

    #[test]
    fn large_prime_axioms() {
        const P: u32 = 2_147_483_647;
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let [a, b, c] = [(); 3].map(|_| rng.gen_range(0..P as i64));
            check_axioms(Fp::<P>::new(a), Fp::<P>::new(b), Fp::<P>::new(c));
            check_axioms(
                ModP::new(a, P).unwrap(),
                ModP::new(b, P).unwrap(),
                ModP::new(c, P).unwrap(),
            );
        }
    }

    #[test]
    fn rational_axioms() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut draw = || rational(rng.gen_range(-9..10), rng.gen_range(1..7)).unwrap();
        for _ in 0..1000 {
            check_axioms(draw(), draw(), draw());
        }
    }

    #[test]
    fn zero_has_no_inverse() {
        assert_eq!(Fp::<3>::zero().inverse(), None);
        assert_eq!(Rational::zero().try_inverse(), Err(FieldError::ZeroInverse));
        assert_eq!(ModP::new(0, 5).unwrap().inverse(), None);
        assert_eq!(ModP::zero().inverse(), None);
    }

    #[test]
    fn unbound_integers_bind_on_contact() {
        let three = ModP::new(3, 5).unwrap();
        let sum = three + ModP::one() + ModP::one();
        assert!(sum.is_zero());
        assert_eq!(sum.modulus(), Some(5));
        assert_eq!(-ModP::one(), ModP::new(4, 5).unwrap());
        assert_eq!(ModP::from_i64(7), ModP::new(2, 5).unwrap());
    }

    #[test]
    fn rejects_composite_modulus() {
        assert_eq!(ModP::new(1, 6), Err(FieldError::NotPrime(6)));
    }

    #[test]
    fn rationals_stay_reduced() {
        let x = rational(6, -4).unwrap();
        assert_eq!(x.to_string(), "-3/2");
        assert_eq!((x.clone() + rational(3, 2).unwrap()).to_string(), "0");
        assert_eq!(Rational::from_i64(4).to_string(), "4");
    }
}
