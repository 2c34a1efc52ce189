//! Single zeta values by Borwein's accelerated alternating series.

use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};

use super::ball::Ball;
use crate::Rational;

/// `ζ(s)` for an integer `s ≥ 2` as a ball at `bits` precision.
///
/// Uses
/// `ζ(s) = −1/(d_N (1 − 2^{1−s})) Σ_{k<N} (−1)^k (d_k − d_N)/(k+1)^s + γ_N`
/// with `d_k = N Σ_{i≤k} (N+i−1)! 4^i / ((N−i)! (2i)!)` and
/// `|γ_N| ≤ 3 (3+√8)^{−N} / (1 − 2^{1−s}) ≤ 6 (5/29)^N` for real `s ≥ 2`.
pub(crate) fn zeta_borwein(s: u32, bits: u32) -> Ball {
    assert!(s >= 2);
    // (3+√8) > 29/5, so each term of N buys log2(5.8) > 2.53 bits
    let terms = ((bits as f64 + 8.0) / 2.53).ceil() as usize + 1;
    let d = borwein_d(terms);
    let d_n = d[terms].clone();
    let factor_den = Rational::one() - Pow::pow(Rational::new(1.into(), 2.into()), s - 1);
    let scale = -(Rational::one() / (Rational::from_integer(d_n.clone()) * factor_den));

    let mut sum = Ball::zero(bits);
    for (k, dk) in d.iter().take(terms).enumerate() {
        let mut term = Rational::new(dk - &d_n, BigInt::from(k + 1).pow(s)) * &scale;
        if k % 2 == 1 {
            term = -term;
        }
        sum = &sum + &Ball::from_rational(&term, bits);
    }
    let bound = Rational::from_integer(6.into())
        * Pow::pow(Rational::new(5.into(), 29.into()), terms as u32);
    sum.add_error(&bound)
}

fn borwein_d(n: usize) -> Vec<BigInt> {
    // t_i = n (n+i−1)! 4^i / ((n−i)! (2i)!), with t_0 = 1 and
    // t_{i+1} / t_i = 4 (n+i)(n−i) / ((2i+1)(2i+2))
    let mut out = Vec::with_capacity(n + 1);
    let mut term = Rational::one();
    let mut acc = Rational::zero();
    for i in 0..=n {
        acc += &term;
        out.push(acc.to_integer());
        debug_assert!(acc.is_integer());
        let (ni, ii) = (n as i64, i as i64);
        term *= Rational::new(
            (4 * (ni + ii) * (ni - ii)).into(),
            ((2 * ii + 1) * (2 * ii + 2)).into(),
        );
    }
    out
}
