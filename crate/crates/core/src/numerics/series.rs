//! Power-series evaluation of `I(0; w; 1)` by splitting the path.
//!
//! With the path cut at `s ∈ (0, 1)`,
//!
//! ```text
//! I(0; w; 1) = Σ_{w = u·v} I(0; u; s) · I(s; v; 1),
//! I(s; v; 1) = (−1)^{|v|} I(0; 1−v_n, …, 1−v_1; 1−s),
//! ```
//!
//! so both pieces are integrals from 0 over letters in {0, ±1, 2}. Each is
//! the value at `y < 1` of a power series `F(t) = I(0; a_1…a_k; t)` whose
//! coefficients obey
//!
//! ```text
//! a_k = 0:  f_n ← f_n / n
//! a_k = c:  f_{N+1} ← −(1/(N+1)) Σ_{n≤N} f_n c^{n−N−1}
//! ```
//!
//! For `|c| ≥ 1` both maps keep `|f_n| ≤ 1` (the second averages values of
//! modulus ≤ 1), so the tail past degree `N` is at most `y^{N+1}/(1−y)`.
//! Every prefix of `u` (resp. reversed, mapped `v`) comes out of a single
//! pass, because the words needed are exactly the prefixes of one word.

use num_traits::{One, Pow, Zero};

use super::ball::Ball;
use crate::word::Word;
use crate::Rational;

/// Degree at which `y^{N+1} / (1−y) ≤ 2^{−bits}`.
fn truncation_degree(y: &Rational, bits: u32) -> usize {
    let yf = num_traits::ToPrimitive::to_f64(y).expect("finite split point");
    let ratio = -yf.log2();
    let extra = -(1.0 - yf).log2();
    ((bits as f64 + extra) / ratio).ceil() as usize + 1
}

/// `y^{N+1} / (1−y)` exactly.
fn tail_bound(y: &Rational, degree: usize) -> Rational {
    Pow::pow(y, degree as u32 + 1) / (Rational::one() - y)
}

/// `I(0; letters[..j]; y)` for `j = 0..=letters.len()`.
///
/// Letters are small integers with `c = 0` or `|c| ≥ 1`; the first letter must
/// be nonzero and `0 < y < 1`.
pub(crate) fn prefix_integrals(letters: &[i64], y: &Rational, bits: u32) -> Vec<Ball> {
    assert!(
        letters.first().is_none_or(|&c| c != 0),
        "series piece must not start with 0"
    );
    assert!(letters.iter().all(|&c| c == 0 || c.abs() >= 1));
    let degree = truncation_degree(y, bits + 4);
    let tail = tail_bound(y, degree);
    let point = Ball::from_rational(y, bits);
    let zero = Ball::zero(bits);

    let mut coeffs = vec![zero.clone(); degree + 1];
    coeffs[0] = Ball::from_int(1, bits);
    let mut out = Vec::with_capacity(letters.len() + 1);
    out.push(Ball::from_int(1, bits));

    for &c in letters {
        let mut next = vec![zero.clone(); degree + 1];
        if c == 0 {
            for n in 1..=degree {
                next[n] = coeffs[n].div_int(n as i64);
            }
        } else {
            // running = Σ_{n≤N} f_n c^{n−N−1}
            let mut running = zero.clone();
            for n in 0..degree {
                running = (&running + &coeffs[n]).div_int(c);
                next[n + 1] = (-&running).div_int(n as i64 + 1);
            }
        }
        coeffs = next;

        let mut acc = zero.clone();
        for n in (1..=degree).rev() {
            acc = &(&acc + &coeffs[n]) * &point;
        }
        out.push(acc.add_error(&tail));
    }
    out
}

/// Evaluates a convergent word with the path cut at `split`.
pub fn eval_word_split(w: &Word, split: &Rational, bits: u32) -> Ball {
    assert!(w.is_convergent(), "divergent word {w}");
    assert!(
        split > &Rational::zero() && split < &Rational::one(),
        "split point must lie in (0, 1)"
    );
    let n = w.weight();
    if n == 0 {
        return Ball::from_int(1, bits);
    }
    let lower: Vec<i64> = w.letters().iter().map(|l| l.value()).collect();
    let upper: Vec<i64> = w.letters().iter().rev().map(|l| 1 - l.value()).collect();
    let head = prefix_integrals(&lower, split, bits);
    let tail = prefix_integrals(&upper, &(Rational::one() - split), bits);

    let mut total = Ball::zero(bits);
    for j in 0..=n {
        let piece = &head[j] * &tail[n - j];
        if (n - j).is_multiple_of(2) {
            total = &total + &piece;
        } else {
            total = &total - &piece;
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;
    use num_bigint::BigInt;
    use num_traits::Signed;

    const PI_SQ_OVER_6: &str = "1.6449340668482264364724151666460251892189499012068";

    fn zeta2() -> Rational {
        super::super::ball::parse_decimal(PI_SQ_OVER_6).unwrap()
    }

    #[test]
    fn zeta_two_from_word() {
        let w = Word::from_values(&[1, 0]).unwrap();
        let b = eval_word_split(&w, &rat(1, 2), 200);
        // I(0;1,0;1) = −ζ(2)
        let expected = -zeta2();
        assert!(
            (b.mid_rational() - &expected).abs()
                < rat(1, 1) / Rational::from_integer(BigInt::from(10).pow(45u32))
        );
        assert!(b.rad_f64() < 1e-55);
    }

    #[test]
    fn log_two_pieces() {
        // I(0; -1; 1) = log 2
        let w = Word::from_values(&[-1]).unwrap();
        let b = eval_word_split(&w, &rat(1, 2), 120);
        assert!((b.mid_f64() - std::f64::consts::LN_2).abs() < 1e-15);
    }

    #[test]
    fn other_split_points_agree() {
        let w = Word::from_values(&[-1, 0, 1, 0, 0]).unwrap();
        let half = eval_word_split(&w, &rat(1, 2), 160);
        let other = eval_word_split(&w, &rat(3, 8), 160);
        assert!(half.overlaps(&other));
    }
}
