//! Finite formal sums over an ordered basis.

use std::collections::btree_map::{self, BTreeMap};
use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};

use crate::Coeff;

/// A finite formal sum `Σ c_b · b` with no zero coefficients stored.
///
/// Terms are kept in a `BTreeMap`, so iteration follows the basis `Ord`
/// and two combinations compare equal exactly when their coefficients do.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LinComb<B: Ord, C> {
    terms: BTreeMap<B, C>,
}

impl<B: Ord, C> Default for LinComb<B, C> {
    fn default() -> Self {
        LinComb {
            terms: BTreeMap::new(),
        }
    }
}

impl<B: Ord, C: Coeff> LinComb<B, C> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_term(basis: B, coeff: C) -> Self {
        let mut out = Self::zero();
        out.add_term(basis, coeff);
        out
    }

    /// `1 · basis`.
    pub fn basis(basis: B) -> Self {
        Self::from_term(basis, C::one())
    }

    /// Adds `coeff · basis`, dropping the entry if it cancels.
    pub fn add_term(&mut self, basis: B, coeff: C) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(basis) {
            btree_map::Entry::Vacant(slot) => {
                slot.insert(coeff);
            }
            btree_map::Entry::Occupied(mut slot) => {
                let sum = slot.get().clone() + coeff;
                if sum.is_zero() {
                    slot.remove();
                } else {
                    *slot.get_mut() = sum;
                }
            }
        }
    }

    /// Adds `scale · other` in place.
    pub fn add_scaled(&mut self, other: &Self, scale: &C)
    where
        B: Clone,
    {
        for (b, c) in other.iter() {
            self.add_term(b.clone(), c.clone() * scale.clone());
        }
    }

    pub fn coeff(&self, basis: &B) -> C {
        self.terms.get(basis).cloned().unwrap_or_else(C::zero)
    }

    pub fn get(&self, basis: &B) -> Option<&C> {
        self.terms.get(basis)
    }

    pub fn remove(&mut self, basis: &B) -> Option<C> {
        self.terms.remove(basis)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&B, &C)> {
        self.terms.iter()
    }

    pub fn basis_elements(&self) -> impl Iterator<Item = &B> {
        self.terms.keys()
    }

    pub fn scale(&self, s: &C) -> Self
    where
        B: Clone,
    {
        let mut out = Self::zero();
        out.add_scaled(self, s);
        out
    }

    /// Sum of all coefficients.
    pub fn mass(&self) -> C {
        self.terms
            .values()
            .fold(C::zero(), |acc, c| acc + c.clone())
    }

    /// Re-expresses every basis element through `f` and re-collects.
    pub fn map_basis<B2: Ord, F: FnMut(&B) -> B2>(&self, mut f: F) -> LinComb<B2, C> {
        let mut out = LinComb::zero();
        for (b, c) in self.iter() {
            out.add_term(f(b), c.clone());
        }
        out
    }

    /// Linear extension of `f : B -> LinComb<B2, C>`.
    pub fn flat_map<B2: Ord + Clone, F: FnMut(&B) -> LinComb<B2, C>>(
        &self,
        mut f: F,
    ) -> LinComb<B2, C> {
        let mut out = LinComb::zero();
        for (b, c) in self.iter() {
            out.add_scaled(&f(b), c);
        }
        out
    }

    /// Fallible variant of [`LinComb::flat_map`].
    pub fn try_flat_map<B2: Ord + Clone, E, F>(&self, mut f: F) -> Result<LinComb<B2, C>, E>
    where
        F: FnMut(&B) -> Result<LinComb<B2, C>, E>,
    {
        let mut out = LinComb::zero();
        for (b, c) in self.iter() {
            out.add_scaled(&f(b)?, c);
        }
        Ok(out)
    }
}

impl<B: Ord, C: Coeff> FromIterator<(B, C)> for LinComb<B, C> {
    fn from_iter<I: IntoIterator<Item = (B, C)>>(iter: I) -> Self {
        let mut out = Self::zero();
        for (b, c) in iter {
            out.add_term(b, c);
        }
        out
    }
}

impl<B: Ord, C> IntoIterator for LinComb<B, C> {
    type Item = (B, C);
    type IntoIter = btree_map::IntoIter<B, C>;

    fn into_iter(self) -> Self::IntoIter {
        self.terms.into_iter()
    }
}

impl<B: Ord + Clone, C: Coeff> AddAssign<&LinComb<B, C>> for LinComb<B, C> {
    fn add_assign(&mut self, rhs: &LinComb<B, C>) {
        for (b, c) in rhs.iter() {
            self.add_term(b.clone(), c.clone());
        }
    }
}

impl<B: Ord + Clone, C: Coeff> SubAssign<&LinComb<B, C>> for LinComb<B, C> {
    fn sub_assign(&mut self, rhs: &LinComb<B, C>) {
        for (b, c) in rhs.iter() {
            self.add_term(b.clone(), -c.clone());
        }
    }
}

impl<B: Ord + Clone, C: Coeff> Add for LinComb<B, C> {
    type Output = Self;

    fn add(mut self, rhs: Self) -> Self {
        self += &rhs;
        self
    }
}

impl<B: Ord + Clone, C: Coeff> Sub for LinComb<B, C> {
    type Output = Self;

    fn sub(mut self, rhs: Self) -> Self {
        self -= &rhs;
        self
    }
}

impl<B: Ord, C: Coeff> Neg for LinComb<B, C> {
    type Output = Self;

    fn neg(self) -> Self {
        LinComb {
            terms: self.terms.into_iter().map(|(b, c)| (b, -c)).collect(),
        }
    }
}

impl<B: Ord + fmt::Debug, C: fmt::Debug> fmt::Debug for LinComb<B, C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;
    use num_traits::{One, Zero};

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn cancelling_terms_are_dropped() {
        let mut a: LinComb<u8, Rational> = LinComb::zero();
        a.add_term(3, q(1, 2));
        a.add_term(3, q(-1, 2));
        assert!(a.is_zero());
        a.add_term(1, Rational::zero());
        assert!(a.is_empty());
    }

    #[test]
    fn equality_is_coefficientwise() {
        let a: LinComb<u8, Rational> = [(1, q(1, 3)), (2, q(2, 1))].into_iter().collect();
        let b: LinComb<u8, Rational> = [(2, q(4, 2)), (1, q(2, 6))].into_iter().collect();
        assert_eq!(a, b);
        assert_eq!((a.clone() - b).len(), 0);
        assert_eq!(a.mass(), q(7, 3));
    }

    #[test]
    fn works_over_floats_too() {
        let mut a: LinComb<&str, f64> = LinComb::basis("x");
        a.add_term("y", 0.5);
        let b = a.scale(&2.0);
        assert_eq!(b.coeff(&"x"), 2.0);
        assert_eq!(b.coeff(&"y"), f64::one());
    }
}
