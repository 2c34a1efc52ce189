mod common;

use proptest::prelude::*;

use common::*;
use mzv_core::identities::{self, Identity};
use mzv_core::word::{shuffle_regularize, Word};
use mzv_core::WordComb;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn shuffle_commutes((a, b) in arb_word_pair(10)) {
        check_shuffle_commutes(&a, &b)?;
    }

    #[test]
    fn shuffle_associates((a, b, c) in arb_word_triple(10)) {
        check_shuffle_associates(&a, &b, &c)?;
    }

    #[test]
    fn shuffle_mass_is_binomial((a, b) in arb_word_pair(10)) {
        check_shuffle_mass(&a, &b)?;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn regularization_is_idempotent(w in arb_word(12)) {
        check_reg_idempotent(&w)?;
    }

    #[test]
    fn regularization_is_a_shuffle_homomorphism((a, b) in arb_word_pair(10)) {
        check_reg_homomorphism(&a, &b)?;
    }

    #[test]
    fn d1_reduction_is_linear((x, y) in arb_word_pair(8), a in -5i64..6, b in -5i64..6) {
        check_d1_linear(&x, &y, a, b)?;
    }

    #[test]
    fn d1_vanishes_without_mixed_signs(w in arb_word(12)) {
        check_mixed_sign_vanishing(&w)?;
    }

    #[test]
    fn d1_vanishes_on_non_alternating_words(v in prop::collection::vec(0i64..2, 1..12)) {
        let w = word(&v);
        prop_assert!(mzv_core::motivic::avoids_mixed_signs(&w));
        check_mixed_sign_vanishing(&w)?;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn numeric_shuffle_is_sound((a, b) in arb_convergent_pair(8)) {
        check_numeric_shuffle(&a, &b, 30)?;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(25))]

    #[test]
    fn containment_is_monotone(w in arb_convergent_word(1, 6)) {
        check_containment_monotone(&w, &[15, 30, 60])?;
    }
}

#[test]
fn index_word_round_trip_through_weight_12() {
    let count = round_trip_exhaustive(12).unwrap();
    assert_eq!(count, (0..=12).map(|n| 3usize.pow(n)).sum::<usize>());
}

#[test]
fn regularized_words_have_convergent_support() {
    for n in 1..=6 {
        for w in all_words(n) {
            let reg: WordComb = shuffle_regularize(&w);
            assert!(reg.basis_elements().all(Word::is_convergent), "{w}");
            if w.is_convergent() {
                assert_eq!(reg, WordComb::basis(w));
            }
        }
    }
}

fn all_generated(max_weight: i64) -> Vec<Identity> {
    let mut out = Vec::new();
    for n in 2..=max_weight {
        out.push(identities::depth1_reduction(n).unwrap());
    }
    for k in 1..=max_weight {
        for l in 1..=max_weight {
            if 2 * k + 2 * l <= max_weight {
                out.push(identities::dihedral(k, l).unwrap());
                out.push(identities::descent_even(k, l).unwrap());
            }
        }
        if 2 * k + 2 <= max_weight {
            out.push(identities::goal_regularization(k).unwrap());
            out.push(identities::theorem1(k).unwrap());
            out.push(identities::assemble_theorem1(k).unwrap());
        }
    }
    out.push(identities::pushdown_39());
    out
}

#[test]
fn every_generator_is_homogeneous_through_weight_30() {
    for id in all_generated(30) {
        assert!(id.is_homogeneous(), "{} {:?}", id.name, id.params);
    }
}

#[test]
fn theorem1_right_side_has_depth_at_most_two() {
    for k in 1..=14 {
        assert!(
            identities::max_depth(&identities::theorem1_rhs(k)) <= 2,
            "k = {k}"
        );
    }
}

#[test]
fn serialization_round_trips() {
    for id in all_generated(14) {
        let back = Identity::from_json(&id.to_json()).unwrap();
        assert_eq!(back.combination, id.combination);
        assert_eq!(back.name, id.name);
        assert_eq!(back.params, id.params);
    }
}
