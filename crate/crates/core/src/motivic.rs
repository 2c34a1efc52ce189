//! The derivations `D_r` on motivic iterated integrals and the reduction of
//! weight-one left factors to multiples of `log 2`.
//!
//! For `I(a_0; a_1, …, a_w; a_{w+1})`,
//!
//! ```text
//! D_r I = Σ_{p=0}^{w−r} I^L(a_p; a_{p+1}, …, a_{p+r}; a_{p+r+1})
//!                      ⊗ I(a_0; a_1, …, a_p, a_{p+r+1}, …, a_w; a_{w+1}).
//! ```
//!
//! At level two the weight-one part of the Lie coalgebra is the line spanned
//! by `log 2`; a weight-one integral `I(a; b; c) = log((c−b)/(a−b))` maps to
//! `ν(c−b) − ν(a−b)` times that class, with `ν(±2) = 1` and `ν` zero on
//! `0, ±1` (`log(−1)` and regularized `log 0` both vanish there).

use thiserror::Error;

use crate::identities::{Identity, Monomial};
use crate::word::{index_to_word, GeneralWord, Letter, Word};
use crate::{Coeff, LinComb, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MotivicError {
    #[error("D_r needs r ≥ 1")]
    ZeroWeight,
    #[error("left factor {0} does not have weight 1")]
    NotWeightOne(String),
}

/// `Σ c · left ⊗ right`.
pub type TensorComb<C> = LinComb<(GeneralWord, GeneralWord), C>;

/// A commutative product of motivic integrals, kept sorted; weight-zero
/// factors are dropped, so the empty product is `1`.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WordMonomial(Vec<GeneralWord>);

impl WordMonomial {
    pub fn from_words(words: Vec<GeneralWord>) -> Self {
        let mut words: Vec<_> = words.into_iter().filter(|w| w.weight() > 0).collect();
        words.sort();
        WordMonomial(words)
    }

    pub fn words(&self) -> &[GeneralWord] {
        &self.0
    }
}

impl std::fmt::Display for WordMonomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self.0.iter().map(|w| w.to_string()).collect();
        f.write_str(&parts.join("*"))
    }
}

/// One raw term of `D_r`, before like terms are merged.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutTerm {
    pub position: usize,
    pub left: GeneralWord,
    pub right: GeneralWord,
}

/// All `w − r + 1` cut terms of `D_r I(0; w; 1)` in order of `p`.
pub fn coaction_dr_raw(w: &Word, r: usize) -> Result<Vec<CutTerm>, MotivicError> {
    coaction_dr_raw_general(&GeneralWord::standard(w), r)
}

fn coaction_dr_raw_general(g: &GeneralWord, r: usize) -> Result<Vec<CutTerm>, MotivicError> {
    if r == 0 {
        return Err(MotivicError::ZeroWeight);
    }
    let weight = g.weight();
    if r > weight {
        return Ok(Vec::new());
    }
    // a_0, a_1, …, a_w, a_{w+1}
    let mut full = Vec::with_capacity(weight + 2);
    full.push(g.lower);
    full.extend_from_slice(&g.letters);
    full.push(g.upper);

    Ok((0..=weight - r)
        .map(|p| {
            let left = GeneralWord::new(full[p], full[p + 1..=p + r].to_vec(), full[p + r + 1]);
            let mut kept = full[1..=p].to_vec();
            kept.extend_from_slice(&full[p + r + 1..=weight]);
            CutTerm {
                position: p,
                left,
                right: GeneralWord::new(g.lower, kept, g.upper),
            }
        })
        .collect())
}

/// `D_r I(0; w; 1)` with like terms merged.
pub fn coaction_dr<C: Coeff>(w: &Word, r: usize) -> Result<TensorComb<C>, MotivicError> {
    Ok(coaction_dr_raw(w, r)?
        .into_iter()
        .map(|t| ((t.left, t.right), C::one()))
        .collect())
}

/// Linear extension of [`coaction_dr`].
pub fn coaction_dr_comb<C: Coeff>(
    x: &LinComb<Word, C>,
    r: usize,
) -> Result<TensorComb<C>, MotivicError> {
    x.try_flat_map(|w| coaction_dr(w, r))
}

fn nu(diff: i64) -> i64 {
    if diff.abs() == 2 {
        1
    } else {
        0
    }
}

/// `log 2` coefficient of the weight-one integral `I(a; b; c)`.
pub fn log2_class(a: Letter, b: Letter, c: Letter) -> i64 {
    nu(c.value() - b.value()) - nu(a.value() - b.value())
}

/// Replaces each weight-one left factor by its `log 2` coefficient and
/// collects the right factors.
pub fn reduce_d1<C: Coeff>(t: &TensorComb<C>) -> Result<LinComb<GeneralWord, C>, MotivicError> {
    let mut out = LinComb::zero();
    for ((left, right), c) in t.iter() {
        if left.weight() != 1 {
            return Err(MotivicError::NotWeightOne(left.to_string()));
        }
        let lambda = log2_class(left.lower, left.letters[0], left.upper);
        if lambda != 0 {
            out.add_term(right.clone(), c.clone() * int_coeff::<C>(lambda));
        }
    }
    Ok(out)
}

fn int_coeff<C: Coeff>(n: i64) -> C {
    let mut acc = C::zero();
    for _ in 0..n.unsigned_abs() {
        acc = acc + C::one();
    }
    if n < 0 {
        -acc
    } else {
        acc
    }
}

/// Motivic lift of a monomial of indices: coefficient sign and word product.
pub fn lift_monomial(m: &Monomial) -> (i64, Vec<GeneralWord>) {
    let mut sign = 1;
    let mut words = Vec::with_capacity(m.factors().len());
    for ix in m.factors() {
        let (s, w) = index_to_word(ix);
        sign *= s;
        words.push(GeneralWord::standard(&w));
    }
    (sign, words)
}

/// `D_r` on products via the Leibniz rule: `D_r(xy) = D_r(x)·y + D_r(y)·x`.
/// The right-hand factor of each term is the whole remaining product.
pub fn coaction_dr_identity(
    id: &Identity,
    r: usize,
) -> Result<LinComb<(GeneralWord, WordMonomial), Rational>, MotivicError> {
    let mut out = LinComb::zero();
    for (mono, c) in id.combination.iter() {
        let (sign, words) = lift_monomial(mono);
        let coeff = c * Rational::from_integer(sign.into());
        for (i, w) in words.iter().enumerate() {
            for term in coaction_dr_raw_general(w, r)? {
                let mut rest = words.clone();
                rest[i] = term.right;
                out.add_term((term.left, WordMonomial::from_words(rest)), coeff.clone());
            }
        }
    }
    Ok(out)
}

/// `D_1` of the motivic lift of an identity, reduced to the `log 2` line.
pub fn reduce_d1_identity(id: &Identity) -> Result<LinComb<WordMonomial, Rational>, MotivicError> {
    let mut out = LinComb::zero();
    for ((left, right), c) in coaction_dr_identity(id, 1)?.iter() {
        let lambda = log2_class(left.lower, left.letters[0], left.upper);
        if lambda != 0 {
            out.add_term(right.clone(), c * Rational::from_integer(lambda.into()));
        }
    }
    Ok(out)
}

/// True if `(0, w, 1)` has no `+1` and `−1` within two positions of each other.
pub fn avoids_mixed_signs(w: &Word) -> bool {
    let mut full = vec![Letter::Zero];
    full.extend_from_slice(w.letters());
    full.push(Letter::One);
    full.iter().enumerate().all(|(i, a)| {
        full[i + 1..full.len().min(i + 3)].iter().all(|b| {
            !matches!(
                (a, b),
                (Letter::One, Letter::MinusOne) | (Letter::MinusOne, Letter::One)
            )
        })
    })
}
