//! Words in the letters {0, +1, -1}, their shuffle product, and shuffle
//! regularization.
//!
//! A [`Word`] `(x_1, …, x_n)` stands for the iterated integral
//! `I(0; x_1, …, x_n; 1) = ∫_{0<t_1<…<t_n<1} Π dt_i / (t_i − x_i)`,
//! so `x_1` sits next to the lower endpoint.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::{Coeff, LinComb};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("letter must be one of 0, 1, -1 (got {0})")]
    BadLetter(i64),
    #[error("index entries must be nonzero integers")]
    ZeroIndex,
    #[error("index has {ks} exponents but {eps} signs")]
    LengthMismatch { ks: usize, eps: usize },
    #[error("cannot parse index `{0}`")]
    Syntax(String),
}

/// One of the three integration letters. The derived order `0 < +1 < −1`
/// is the canonical sort order for words.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    Zero,
    One,
    MinusOne,
}

impl Letter {
    pub const ALL: [Letter; 3] = [Letter::Zero, Letter::One, Letter::MinusOne];

    pub fn value(self) -> i64 {
        match self {
            Letter::Zero => 0,
            Letter::One => 1,
            Letter::MinusOne => -1,
        }
    }

    pub fn from_value(v: i64) -> Result<Self, WordError> {
        match v {
            0 => Ok(Letter::Zero),
            1 => Ok(Letter::One),
            -1 => Ok(Letter::MinusOne),
            other => Err(WordError::BadLetter(other)),
        }
    }

    fn from_sign(s: Sign) -> Self {
        match s {
            Sign::Plus => Letter::One,
            Sign::Minus => Letter::MinusOne,
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

/// Letter sequence of `I(0; …; 1)`. The empty word is the unit (value 1).
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_values(values: &[i64]) -> Result<Self, WordError> {
        values
            .iter()
            .map(|&v| Letter::from_value(v))
            .collect::<Result<Vec<_>, _>>()
            .map(Word)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn weight(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Convergent iff empty, or the first letter is not 0 and the last is not +1.
    pub fn is_convergent(&self) -> bool {
        match (self.0.first(), self.0.last()) {
            (Some(first), Some(last)) => *first != Letter::Zero && *last != Letter::One,
            _ => true,
        }
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.0.clone();
        letters.extend_from_slice(&other.0);
        Word(letters)
    }

    fn prepend(&self, letter: Letter) -> Word {
        let mut letters = Vec::with_capacity(self.0.len() + 1);
        letters.push(letter);
        letters.extend_from_slice(&self.0);
        Word(letters)
    }

    fn append(&self, letter: Letter) -> Word {
        let mut letters = self.0.clone();
        letters.push(letter);
        Word(letters)
    }
}

impl From<Vec<Letter>> for Word {
    fn from(letters: Vec<Letter>) -> Self {
        Word(letters)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{l}")?;
        }
        f.write_str(")")
    }
}

/// `I(lower; letters; upper)` with arbitrary endpoints in {0, ±1}.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GeneralWord {
    pub lower: Letter,
    pub letters: Vec<Letter>,
    pub upper: Letter,
}

impl GeneralWord {
    pub fn new(lower: Letter, letters: Vec<Letter>, upper: Letter) -> Self {
        GeneralWord {
            lower,
            letters,
            upper,
        }
    }

    /// The standard path from 0 to 1.
    pub fn standard(word: &Word) -> Self {
        GeneralWord::new(Letter::Zero, word.0.clone(), Letter::One)
    }

    pub fn weight(&self) -> usize {
        self.letters.len()
    }

    /// The underlying [`Word`] when the endpoints are 0 and 1.
    pub fn as_word(&self) -> Option<Word> {
        (self.lower == Letter::Zero && self.upper == Letter::One)
            .then(|| Word(self.letters.clone()))
    }
}

impl fmt::Display for GeneralWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "I({}; ", self.lower)?;
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, "; {})", self.upper)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    fn times(self, other: Sign) -> Sign {
        if self == other {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

/// `ζ^⧢_{k0}(k_1, …, k_d; ε_1, …, ε_d)`. With `k0 = 0` this is the
/// ordinary alternating MZV `Σ_{0<n_1<…<n_d} Π ε_i^{n_i} / n_i^{k_i}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IndexVector {
    k0: u32,
    ks: Vec<u32>,
    eps: Vec<Sign>,
}

impl IndexVector {
    pub fn new(k0: u32, ks: Vec<u32>, eps: Vec<Sign>) -> Result<Self, WordError> {
        if ks.len() != eps.len() {
            return Err(WordError::LengthMismatch {
                ks: ks.len(),
                eps: eps.len(),
            });
        }
        if ks.contains(&0) {
            return Err(WordError::ZeroIndex);
        }
        Ok(IndexVector { k0, ks, eps })
    }

    /// Builds an index from the bar encoding: a negative entry `-k` is `k̄`.
    pub fn signed(k0: u32, entries: &[i64]) -> Result<Self, WordError> {
        let mut ks = Vec::with_capacity(entries.len());
        let mut eps = Vec::with_capacity(entries.len());
        for &e in entries {
            if e == 0 {
                return Err(WordError::ZeroIndex);
            }
            let k =
                u32::try_from(e.unsigned_abs()).map_err(|_| WordError::Syntax(e.to_string()))?;
            ks.push(k);
            eps.push(if e < 0 { Sign::Minus } else { Sign::Plus });
        }
        IndexVector::new(k0, ks, eps)
    }

    /// Panicking shorthand for literal indices, e.g. `zeta(&[2, -10])`.
    pub fn zeta(entries: &[i64]) -> Self {
        IndexVector::signed(0, entries).expect("literal index")
    }

    pub fn k0(&self) -> u32 {
        self.k0
    }

    pub fn ks(&self) -> &[u32] {
        &self.ks
    }

    pub fn eps(&self) -> &[Sign] {
        &self.eps
    }

    pub fn depth(&self) -> usize {
        self.ks.len()
    }

    pub fn weight(&self) -> u32 {
        self.k0 + self.ks.iter().sum::<u32>()
    }

    pub fn is_convergent(&self) -> bool {
        self.k0 == 0
            && !matches!(
                (self.ks.last(), self.eps.last()),
                (Some(1), Some(Sign::Plus))
            )
    }

    /// True if some `ε_j = −1`.
    pub fn is_alternating(&self) -> bool {
        self.eps.contains(&Sign::Minus)
    }

    /// Entries in bar encoding.
    pub fn signed_entries(&self) -> Vec<i64> {
        self.ks
            .iter()
            .zip(&self.eps)
            .map(|(&k, &e)| k as i64 * e.value())
            .collect()
    }
}

impl fmt::Display for IndexVector {
    /// `z(3,-9)` or `zr(1; 1,-2)`; this is also the cache key.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body = self
            .signed_entries()
            .iter()
            .map(|e| e.to_string())
            .collect::<Vec<_>>()
            .join(",");
        if self.k0 == 0 {
            write!(f, "z({body})")
        } else {
            write!(f, "zr({}; {body})", self.k0)
        }
    }
}

impl FromStr for IndexVector {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || WordError::Syntax(s.to_string());
        let s = s.trim();
        let (k0, body) = if let Some(rest) = s.strip_prefix("zr(") {
            let inner = rest.strip_suffix(')').ok_or_else(bad)?;
            let (k0, body) = inner.split_once(';').ok_or_else(bad)?;
            (k0.trim().parse::<u32>().map_err(|_| bad())?, body)
        } else if let Some(rest) = s.strip_prefix("z(") {
            (0, rest.strip_suffix(')').ok_or_else(bad)?)
        } else {
            return Err(bad());
        };
        let body = body.trim();
        let entries = if body.is_empty() {
            Vec::new()
        } else {
            body.split(',')
                .map(|t| t.trim().parse::<i64>().map_err(|_| bad()))
                .collect::<Result<Vec<_>, _>>()?
        };
        IndexVector::signed(k0, &entries)
    }
}

/// Shuffle product of two words, multiplicities collected as coefficients.
pub fn shuffle<C: Coeff>(w1: &Word, w2: &Word) -> LinComb<Word, C> {
    let (a, b) = (w1.letters(), w2.letters());
    // row[j] holds the shuffle of a[..i] with b[..j]
    let mut row: Vec<LinComb<Word, C>> = Vec::with_capacity(b.len() + 1);
    row.push(LinComb::basis(Word::empty()));
    for j in 1..=b.len() {
        let prev = row[j - 1].map_basis(|w| w.append(b[j - 1]));
        row.push(prev);
    }
    for i in 1..=a.len() {
        let mut next: Vec<LinComb<Word, C>> = Vec::with_capacity(b.len() + 1);
        next.push(row[0].map_basis(|w| w.append(a[i - 1])));
        for j in 1..=b.len() {
            let mut cell = row[j].map_basis(|w| w.append(a[i - 1]));
            cell += &next[j - 1].map_basis(|w| w.append(b[j - 1]));
            next.push(cell);
        }
        row = next;
    }
    row.pop().unwrap_or_default()
}

/// Bilinear extension of [`shuffle`].
pub fn shuffle_comb<C: Coeff>(x: &LinComb<Word, C>, y: &LinComb<Word, C>) -> LinComb<Word, C> {
    let mut out = LinComb::zero();
    for (u, cu) in x.iter() {
        for (v, cv) in y.iter() {
            out.add_scaled(&shuffle(u, v), &(cu.clone() * cv.clone()));
        }
    }
    out
}

/// `(sign, word)` with `ζ^⧢_{k0}(ix) = sign · I^⧢(0; word; 1)`.
pub fn index_to_word(ix: &IndexVector) -> (i64, Word) {
    let mut letters = vec![Letter::Zero; ix.k0 as usize];
    let d = ix.depth();
    // η_j = Π_{i ≥ j} ε_i, accumulated from the right
    let mut etas = vec![Sign::Plus; d];
    let mut acc = Sign::Plus;
    for j in (0..d).rev() {
        acc = acc.times(ix.eps[j]);
        etas[j] = acc;
    }
    for (k, eta) in ix.ks.iter().zip(etas) {
        letters.push(Letter::from_sign(eta));
        letters.extend(std::iter::repeat_n(Letter::Zero, *k as usize - 1));
    }
    let sign = if d.is_multiple_of(2) { 1 } else { -1 };
    (sign, Word(letters))
}

/// Inverse of [`index_to_word`]; the sign is `(-1)^depth`.
pub fn word_to_index(w: &Word) -> IndexVector {
    let letters = w.letters();
    let k0 = letters.iter().take_while(|&&l| l == Letter::Zero).count();
    let mut ks = Vec::new();
    let mut etas = Vec::new();
    for &l in &letters[k0..] {
        match l {
            Letter::Zero => *ks.last_mut().expect("block opened by a nonzero letter") += 1,
            Letter::One => {
                ks.push(1u32);
                etas.push(Sign::Plus);
            }
            Letter::MinusOne => {
                ks.push(1u32);
                etas.push(Sign::Minus);
            }
        }
    }
    let eps = (0..etas.len())
        .map(|j| match etas.get(j + 1) {
            Some(&next) => etas[j].times(next),
            None => etas[j],
        })
        .collect();
    IndexVector {
        k0: k0 as u32,
        ks,
        eps,
    }
}

/// Shuffle regularization with `I(0;0;1) = I(0;1;1) = 0`.
///
/// Leading zeros are removed first via
/// `reg(0^a b v) = (−1)^a b·(0^a ⧢ v)`, then trailing ones via
/// `reg(v c 1^m) = (−1)^m (v ⧢ 1^m)·c`. Every output word is convergent.
pub fn shuffle_regularize<C: Coeff>(w: &Word) -> LinComb<Word, C> {
    if w.is_convergent() {
        return LinComb::basis(w.clone());
    }
    strip_leading_zeros::<C>(w).flat_map(strip_trailing_ones)
}

/// Linear extension of [`shuffle_regularize`].
pub fn shuffle_regularize_comb<C: Coeff>(x: &LinComb<Word, C>) -> LinComb<Word, C> {
    x.flat_map(shuffle_regularize)
}

fn alternating_sign<C: Coeff>(n: usize) -> C {
    if n.is_multiple_of(2) {
        C::one()
    } else {
        -C::one()
    }
}

fn strip_leading_zeros<C: Coeff>(w: &Word) -> LinComb<Word, C> {
    let letters = w.letters();
    let a = letters.iter().take_while(|&&l| l == Letter::Zero).count();
    if a == 0 {
        return LinComb::basis(w.clone());
    }
    if a == letters.len() {
        return LinComb::zero();
    }
    let head = letters[a];
    let zeros = Word(vec![Letter::Zero; a]);
    let rest = Word(letters[a + 1..].to_vec());
    shuffle::<C>(&zeros, &rest)
        .map_basis(|u| u.prepend(head))
        .scale(&alternating_sign(a))
}

fn strip_trailing_ones<C: Coeff>(w: &Word) -> LinComb<Word, C> {
    let letters = w.letters();
    let m = letters
        .iter()
        .rev()
        .take_while(|&&l| l == Letter::One)
        .count();
    if m == 0 {
        return LinComb::basis(w.clone());
    }
    if m == letters.len() {
        return LinComb::zero();
    }
    let cut = letters.len() - m - 1;
    let tail = letters[cut];
    let ones = Word(vec![Letter::One; m]);
    let front = Word(letters[..cut].to_vec());
    shuffle::<C>(&front, &ones)
        .map_basis(|u| u.append(tail))
        .scale(&alternating_sign(m))
}
