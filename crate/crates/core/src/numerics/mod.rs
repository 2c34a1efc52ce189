//! Guaranteed-error evaluation of words, indices, monomials and identities.

pub mod ball;
pub mod cache;
pub mod series;
mod zeta;

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Pow};
use rayon::prelude::*;
use serde_json::{json, Value};
use thiserror::Error;

pub use ball::Ball;
pub use cache::ConstantCache;

use crate::identities::{Identity, Monomial};
use crate::word::{index_to_word, shuffle_regularize, IndexVector, Word};
use crate::{rat, MonomialComb, Rational, WordComb};

#[derive(Debug, Error)]
pub enum NumericsError {
    #[error("word {0} is divergent; regularize it first")]
    Divergent(String),
    #[error("target precision must be at least 10 digits (got {0})")]
    Precision(u32),
    #[error("ζ(n) needs n ≥ 2 (got {0})")]
    ZetaArgument(u32),
    #[error("cache: {0}")]
    Cache(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Requested number of guaranteed decimal digits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Precision {
    target_digits: u32,
}

impl Precision {
    pub fn new(target_digits: u32) -> Result<Self, NumericsError> {
        if target_digits < 10 {
            return Err(NumericsError::Precision(target_digits));
        }
        Ok(Precision { target_digits })
    }

    pub fn digits(&self) -> u32 {
        self.target_digits
    }

    /// `⌈digits · log2 10⌉ + 64`.
    pub fn working_bits(&self) -> u32 {
        (self.target_digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + 64
    }

    /// `10^−digits`.
    pub fn tolerance(&self) -> Rational {
        Rational::new(BigInt::one(), BigInt::from(10u32).pow(self.target_digits))
    }
}

/// `I(0; w; 1)` for a convergent word, path split at 1/2.
pub fn eval_word(w: &Word, p: &Precision) -> Result<Ball, NumericsError> {
    eval_word_bits(w, &rat(1, 2), p.working_bits())
}

/// [`eval_word`] with an explicit split point and working precision.
pub fn eval_word_bits(w: &Word, split: &Rational, bits: u32) -> Result<Ball, NumericsError> {
    if !w.is_convergent() {
        return Err(NumericsError::Divergent(w.to_string()));
    }
    Ok(series::eval_word_split(w, split, bits))
}

/// Σ c_w I(0; w; 1) over a combination of convergent words.
pub fn eval_word_comb(comb: &WordComb, p: &Precision) -> Result<Ball, NumericsError> {
    let bits = p.working_bits();
    let mut total = Ball::zero(bits);
    for (w, c) in comb.iter() {
        total = &total + &eval_word(w, p)?.mul_rational(c);
    }
    Ok(total)
}

/// `ζ(n)` by an accelerated series; independent of the word evaluator.
pub fn zeta_single(n: u32, p: &Precision) -> Result<Ball, NumericsError> {
    if n < 2 {
        return Err(NumericsError::ZetaArgument(n));
    }
    Ok(zeta::zeta_borwein(n, p.working_bits()))
}

/// `ζ^⧢_{k0}(ix)`, regularizing first when the index diverges.
pub fn eval_index(ix: &IndexVector, p: &Precision) -> Result<Ball, NumericsError> {
    eval_index_uncached(ix, p)
}

pub(crate) fn eval_index_uncached(ix: &IndexVector, p: &Precision) -> Result<Ball, NumericsError> {
    let (sign, word) = index_to_word(ix);
    let value = if word.is_convergent() {
        eval_word(&word, p)?
    } else {
        eval_word_comb(&shuffle_regularize(&word), p)?
    };
    Ok(value.mul_int(sign))
}

fn eval_factor(
    ix: &IndexVector,
    p: &Precision,
    cache: &ConstantCache,
) -> Result<Ball, NumericsError> {
    cache.get_or_compute(&ix.to_string(), p.working_bits(), || {
        if ix.k0() == 0 && ix.depth() == 1 && !ix.is_alternating() && ix.ks()[0] >= 2 {
            zeta_single(ix.ks()[0], p)
        } else {
            eval_index_uncached(ix, p)
        }
    })
}

/// Product of cached factor values.
pub fn eval_monomial(
    m: &Monomial,
    p: &Precision,
    cache: &ConstantCache,
) -> Result<Ball, NumericsError> {
    let mut acc = Ball::from_int(1, p.working_bits());
    for ix in m.factors() {
        acc = &acc * &eval_factor(ix, p, cache)?;
    }
    Ok(acc)
}

/// Value of a monomial combination; distinct factors are evaluated in parallel.
pub fn eval_comb(
    comb: &MonomialComb,
    p: &Precision,
    cache: &ConstantCache,
) -> Result<Ball, NumericsError> {
    let mut factors: Vec<&IndexVector> = comb
        .basis_elements()
        .flat_map(|m| m.factors().iter())
        .collect();
    factors.sort();
    factors.dedup();
    let values = factors
        .par_iter()
        .map(|ix| eval_factor(ix, p, cache).map(|b| ((*ix).clone(), b)))
        .collect::<Result<HashMap<_, _>, _>>()?;

    let bits = p.working_bits();
    let mut total = Ball::zero(bits);
    for (mono, c) in comb.iter() {
        let mut term = Ball::from_int(1, bits);
        for ix in mono.factors() {
            term = &term * &values[ix];
        }
        total = &total + &term.mul_rational(c);
    }
    Ok(total)
}

#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub name: String,
    pub params: BTreeMap<String, i64>,
    pub digits: u32,
    pub residual: Ball,
    pub pass: bool,
}

impl VerificationReport {
    pub fn to_json(&self) -> Value {
        json!({
            "name": self.name,
            "params": self.params,
            "digits": self.digits,
            "pass": self.pass,
            "residual_mid": self.residual.mid_decimal(self.digits as usize + 5),
            "residual_rad_log2": self.residual.rad_log2(),
        })
    }
}

/// Evaluates `id.combination` and passes iff `|mid| ≤ rad + 10^−(digits−5)`.
pub fn eval_identity(id: &Identity, p: &Precision) -> Result<VerificationReport, NumericsError> {
    eval_identity_cached(id, p, &ConstantCache::in_memory())
}

pub fn eval_identity_cached(
    id: &Identity,
    p: &Precision,
    cache: &ConstantCache,
) -> Result<VerificationReport, NumericsError> {
    let residual = eval_comb(&id.combination, p, cache)?;
    let slack = Rational::new(BigInt::one(), Pow::pow(BigInt::from(10u32), p.digits() - 5));
    let pass = residual.mid_within(&slack);
    Ok(VerificationReport {
        name: id.name.clone(),
        params: id.params.clone(),
        digits: p.digits(),
        residual,
        pass,
    })
}
