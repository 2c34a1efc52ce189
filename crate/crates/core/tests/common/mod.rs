#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::{One, Signed};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

use mzv_core::identities::binom;
use mzv_core::motivic::{self, avoids_mixed_signs, coaction_dr, coaction_dr_comb, reduce_d1};
use mzv_core::numerics::{eval_word, eval_word_comb, Ball, Precision};
use mzv_core::word::{
    index_to_word, shuffle, shuffle_comb, shuffle_regularize, shuffle_regularize_comb,
    word_to_index, Letter, Word,
};
use mzv_core::{Rational, WordComb};

pub fn word(vals: &[i64]) -> Word {
    Word::from_values(vals).unwrap()
}

pub fn precision(digits: u32) -> Precision {
    Precision::new(digits).unwrap()
}

/// Radius of a ball as an exact rational.
fn radius(b: &Ball) -> Rational {
    Rational::new(BigInt::from(b.rad_raw().clone()), BigInt::one() << b.prec())
}

/// Smallest ball containing both inputs.
pub fn hull(a: &Ball, b: &Ball) -> Ball {
    let mid = (a + b).div_int(2);
    let half_gap = (a.mid_rational() - b.mid_rational()).abs() / Rational::from_integer(2.into());
    mid.add_error(&(half_gap + radius(a).max(radius(b))))
}

/// `ζ(k_1, …, k_d; +1, …, +1, −1)` by direct summation of the nested series
/// `Σ_{n_1<…<n_d} (−1)^{n_d} / (n_1^{k_1} ⋯ n_d^{k_d})`.
///
/// The outer terms alternate and eventually decrease, so the value lies
/// between consecutive partial sums. Each of the `averaging` passes replaces
/// the partial sums by means of neighbours, which is again an alternating
/// sequence of bracketing partial sums as long as the tail stays monotone.
/// That condition is asserted on the terms actually used.
pub fn alternating_outer_sum(ks: &[u32], terms: usize, averaging: usize, bits: u32) -> Ball {
    assert!(!ks.is_empty());
    assert!((terms as f64) > (ks.len() as f64).exp());
    let depth = ks.len();
    let len = terms + averaging + 2;
    // level[n] = Σ over n_1 < … < n_j ≤ n at the current depth j
    let mut level: Vec<Ball> = vec![Ball::from_int(1, bits); len];
    for (j, &k) in ks.iter().enumerate() {
        let outer = j + 1 == depth;
        let mut next = Vec::with_capacity(len);
        next.push(Ball::zero(bits));
        for n in 1..len {
            let mut t = level[n - 1].clone();
            for _ in 0..k {
                t = t.div_int(n as i64);
            }
            if outer && n % 2 == 1 {
                t = -t;
            }
            let acc = &next[n - 1] + &t;
            next.push(acc);
        }
        level = next;
    }
    let mut sums: Vec<Ball> = level[terms..].to_vec();
    for pass in 0..=averaging {
        let steps: Vec<f64> = sums.windows(2).map(|p| (&p[1] - &p[0]).mid_f64()).collect();
        for pair in steps.windows(2) {
            assert!(
                pair[0].signum() != pair[1].signum(),
                "pass {pass}: tail does not alternate"
            );
            assert!(
                pair[0].abs() > pair[1].abs(),
                "pass {pass}: tail does not shrink"
            );
        }
        if pass < averaging {
            sums = sums
                .windows(2)
                .map(|p| (&p[0] + &p[1]).div_int(2))
                .collect();
        }
    }
    hull(&sums[0], &sums[1])
}

/// Words over `{−1, 0}`: inner signs `+1`, outer sign `−1`.
pub const ORACLE_WORDS: [&[i64]; 10] = [
    &[-1],
    &[-1, 0],
    &[-1, -1],
    &[-1, 0, 0],
    &[-1, -1, 0],
    &[-1, 0, -1, 0],
    &[-1, -1, -1, 0, 0],
    &[-1, 0, -1, -1, 0, 0],
    &[-1, 0, 0, -1, 0, 0],
    &[-1, -1, -1, -1, -1, -1],
];

/// Inverts the word encoding for words over `{−1, 0}` with a leading `−1`:
/// every block `−1 0^{k−1}` contributes one `k`.
pub fn blocks_of_minus_one_word(w: &Word) -> Vec<u32> {
    let mut ks = Vec::new();
    for l in w.letters() {
        match l {
            Letter::MinusOne => ks.push(1),
            Letter::Zero => *ks.last_mut().expect("leading -1") += 1,
            Letter::One => panic!("letter 1 not allowed"),
        }
    }
    ks
}

pub fn arb_word(max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(prop::sample::select(vec![0i64, 1, -1]), 0..=max_len)
        .prop_map(|v| word(&v))
}

pub fn arb_convergent_word(min_len: usize, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(prop::sample::select(vec![0i64, 1, -1]), min_len..=max_len)
        .prop_map(|v| word(&v))
        .prop_filter("convergent", |w| w.is_convergent())
}

pub fn arb_word_pair(max_total: usize) -> impl Strategy<Value = (Word, Word)> {
    (0..=max_total)
        .prop_flat_map(move |a| (arb_word(a), arb_word(max_total - a)))
        .prop_map(|(x, y)| (x, y))
}

pub fn arb_word_triple(max_total: usize) -> impl Strategy<Value = (Word, Word, Word)> {
    (0..=max_total, 0..=max_total).prop_flat_map(move |(a, b)| {
        let b = b.min(max_total - a);
        (arb_word(a), arb_word(b), arb_word(max_total - a - b))
    })
}

pub fn arb_convergent_pair(max_total: usize) -> impl Strategy<Value = (Word, Word)> {
    (1..max_total).prop_flat_map(move |a| {
        (
            arb_convergent_word(1, a),
            arb_convergent_word(1, max_total - a),
        )
    })
}

fn as_comb(w: &Word) -> WordComb {
    WordComb::basis(w.clone())
}

pub fn check_shuffle_commutes(a: &Word, b: &Word) -> Result<(), TestCaseError> {
    prop_assert_eq!(shuffle::<Rational>(a, b), shuffle::<Rational>(b, a));
    Ok(())
}

pub fn check_shuffle_associates(a: &Word, b: &Word, c: &Word) -> Result<(), TestCaseError> {
    let left = shuffle_comb(&shuffle::<Rational>(a, b), &as_comb(c));
    let right = shuffle_comb(&as_comb(a), &shuffle::<Rational>(b, c));
    prop_assert_eq!(left, right);
    Ok(())
}

pub fn check_shuffle_mass(a: &Word, b: &Word) -> Result<(), TestCaseError> {
    let n = (a.weight() + b.weight()) as i64;
    prop_assert_eq!(
        shuffle::<Rational>(a, b).mass(),
        binom(n, a.weight() as i64)
    );
    Ok(())
}

pub fn check_reg_idempotent(w: &Word) -> Result<(), TestCaseError> {
    let once: WordComb = shuffle_regularize(w);
    prop_assert_eq!(shuffle_regularize_comb(&once), once.clone());
    for (u, _) in once.iter() {
        prop_assert!(u.is_convergent(), "{} not convergent", u);
    }
    Ok(())
}

pub fn check_reg_homomorphism(a: &Word, b: &Word) -> Result<(), TestCaseError> {
    let left = shuffle_regularize_comb(&shuffle::<Rational>(a, b));
    let right = shuffle_comb(&shuffle_regularize::<Rational>(a), &shuffle_regularize(b));
    prop_assert_eq!(left, right);
    Ok(())
}

pub fn check_numeric_shuffle(a: &Word, b: &Word, digits: u32) -> Result<(), TestCaseError> {
    let p = precision(digits);
    let product = &eval_word(a, &p).unwrap() * &eval_word(b, &p).unwrap();
    let expanded = eval_word_comb(&shuffle(a, b), &p).unwrap();
    prop_assert!(
        product.overlaps(&expanded),
        "{} ⧢ {}: {} vs {}",
        a,
        b,
        product,
        expanded
    );
    Ok(())
}

pub fn check_containment_monotone(w: &Word, levels: &[u32]) -> Result<(), TestCaseError> {
    let balls: Vec<Ball> = levels
        .iter()
        .map(|&d| eval_word(w, &precision(d)).unwrap())
        .collect();
    for pair in balls.windows(2) {
        prop_assert!(
            pair[1].overlaps(&pair[0]),
            "{}: {} vs {}",
            w,
            pair[0],
            pair[1]
        );
    }
    Ok(())
}

pub fn check_d1_linear(x: &Word, y: &Word, a: i64, b: i64) -> Result<(), TestCaseError> {
    let (qa, qb) = (
        Rational::from_integer(a.into()),
        Rational::from_integer(b.into()),
    );
    let mut combo = as_comb(x).scale(&qa);
    combo += &as_comb(y).scale(&qb);
    let whole = reduce_d1(&coaction_dr_comb(&combo, 1).unwrap()).unwrap();
    let mut parts = reduce_d1(&coaction_dr::<Rational>(x, 1).unwrap())
        .unwrap()
        .scale(&qa);
    parts += &reduce_d1(&coaction_dr::<Rational>(y, 1).unwrap())
        .unwrap()
        .scale(&qb);
    prop_assert_eq!(whole, parts);
    Ok(())
}

pub fn check_mixed_sign_vanishing(w: &Word) -> Result<(), TestCaseError> {
    if avoids_mixed_signs(w) {
        for t in motivic::coaction_dr_raw(w, 1).unwrap() {
            let class = motivic::log2_class(t.left.lower, t.left.letters[0], t.left.upper);
            prop_assert_eq!(class, 0, "{} at cut {}", w, t.position);
        }
    }
    Ok(())
}

/// Every word of length `n` over `{0, 1, −1}`, in base-3 order.
pub fn all_words(n: usize) -> impl Iterator<Item = Word> {
    let total = 3usize.pow(n as u32);
    (0..total).map(move |mut code| {
        let mut vals = Vec::with_capacity(n);
        for _ in 0..n {
            vals.push([0i64, 1, -1][code % 3]);
            code /= 3;
        }
        word(&vals)
    })
}

/// Both directions of the index/word correspondence on every word of
/// weight at most `max_weight`.
pub fn round_trip_exhaustive(max_weight: usize) -> Result<usize, String> {
    let mut count = 0;
    for n in 0..=max_weight {
        for w in all_words(n) {
            let ix = word_to_index(&w);
            let (sign, back) = index_to_word(&ix);
            if back != w || sign != if ix.depth().is_multiple_of(2) { 1 } else { -1 } {
                return Err(format!("{w} -> {ix} -> {back}"));
            }
            if word_to_index(&back) != ix {
                return Err(format!("{ix} does not return"));
            }
            count += 1;
        }
    }
    Ok(count)
}
