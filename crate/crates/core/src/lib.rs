//! Alternating multiple zeta values: shuffle-algebra words, identity
//! generators with exact rational coefficients, motivic derivations, and
//! ball-arithmetic evaluation with guaranteed error radii.
//!
//! The combinatorial layer is generic over the coefficient scalar (anything
//! implementing [`Coeff`]); the aliases below fix it to exact rationals,
//! which is what every identity in this crate uses.

pub mod identities;
pub mod lincomb;
pub mod motivic;
pub mod numerics;
pub mod word;

use std::fmt::Debug;
use std::ops::Neg;

use num_traits::Num;

pub use lincomb::LinComb;

/// Scalars usable as coefficients of a [`LinComb`].
pub trait Coeff: Num + Neg<Output = Self> + Clone + Debug {}

impl<T: Num + Neg<Output = T> + Clone + Debug> Coeff for T {}

/// Exact rational scalar.
pub type Rational = num_rational::BigRational;

/// Formal sum of words with rational coefficients.
pub type WordComb = LinComb<word::Word, Rational>;

/// Formal sum of index monomials with rational coefficients.
pub type MonomialComb = LinComb<identities::Monomial, Rational>;

/// D_r output over the rationals.
pub type QTensorComb = motivic::TensorComb<Rational>;

/// Convenience constructor for small rationals.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(num.into(), den.into())
}
