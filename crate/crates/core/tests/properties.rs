//! Property tests for the structural invariants that hold for arbitrary
//! weights, not just the hand-picked examples.

use gkrs::characters::{tensor, FormalCharacter};
use gkrs::multiplet::{harmonic_inverse, multiplet};
use gkrs::rootsystem::{build_root_system, LieType, RootDatum, Weight};
use gkrs::subpair::{build_subpair, EqualRankPair, HSpec};
use gkrs::weylgroup::{enumerate, make_dominant};
use proptest::prelude::*;

fn datum(t: &str) -> RootDatum {
    build_root_system(&LieType::parse(t).unwrap()).unwrap()
}

fn rank_two_type() -> impl Strategy<Value = &'static str> {
    prop_oneof![Just("A2"), Just("B2"), Just("G2"), Just("A1xA1")]
}

fn small_weight(rank: usize) -> impl Strategy<Value = Weight> {
    prop::collection::vec(-6i64..=6, rank).prop_map(|v| Weight::from_i64(&v))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn form_is_invariant_under_every_group_element(t in rank_two_type(),
                                                   x in small_weight(2),
                                                   y in small_weight(2)) {
        let d = datum(t);
        let base = d.inner(&x, &y);
        for w in &enumerate(&d).elements {
            prop_assert_eq!(d.inner(&w.act(&x), &w.act(&y)), base.clone());
        }
    }

    #[test]
    fn make_dominant_lands_in_the_chamber(t in rank_two_type(), x in small_weight(2)) {
        let d = datum(t);
        let (w, dom, regular) = make_dominant(&d, &x);
        prop_assert!(dom.is_dominant());
        prop_assert_eq!(w.act(&x), dom.clone());
        // Regularity matches the wall test against all positive roots.
        let on_wall = d.positive_roots.iter().any(|a| {
            use num_traits::Zero;
            d.inner(&dom, a).is_zero()
        });
        prop_assert_eq!(regular, !on_wall);
        if regular {
            let count = enumerate(&d)
                .elements
                .iter()
                .filter(|u| u.act(&x).is_dominant())
                .count();
            prop_assert_eq!(count, 1);
        }
    }

    #[test]
    fn tensor_is_commutative_on_virtual_characters(a0 in small_weight(2),
                                                   a1 in small_weight(2),
                                                   m0 in -3i64..=3,
                                                   m1 in -3i64..=3) {
        let mut a = FormalCharacter::zero(2);
        a.add_term(a0, m0);
        let mut b = FormalCharacter::zero(2);
        b.add_term(a1, m1);
        prop_assert_eq!(tensor(&a, &b).unwrap(), tensor(&b, &a).unwrap());
    }
}

fn corpus_pair(idx: usize) -> EqualRankPair {
    let specs = [
        ("A1", "cartan"),
        ("A2", "cartan"),
        ("A2", "bds:0"),
        ("B2", "bds:1"),
        ("G2", "bds:0"),
        ("G2", "bds:1"),
    ];
    let (t, h) = specs[idx % specs.len()];
    build_subpair(&datum(t), &HSpec::parse(h).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn multiplet_round_trips_through_the_inverse(pair_idx in 0usize..6,
                                                 c0 in 0i64..=3,
                                                 c1 in 0i64..=3) {
        let pair = corpus_pair(pair_idx);
        let lam = if pair.g.rank == 1 {
            Weight::from_i64(&[c0])
        } else {
            Weight::from_i64(&[c0, c1])
        };
        let entries = multiplet(&pair, &lam).unwrap();
        // Entries are pairwise distinct and invert to (sign, lambda).
        for (i, e) in entries.iter().enumerate() {
            for f in entries.iter().skip(i + 1) {
                prop_assert_ne!(&e.mu, &f.mu);
            }
            let inv = harmonic_inverse(&pair, &e.mu).unwrap();
            prop_assert_eq!(inv, Some((e.sign, lam.clone())));
        }
    }

    #[test]
    fn shifted_norms_are_constant_across_the_multiplet(pair_idx in 0usize..6,
                                                       c0 in 0i64..=4,
                                                       c1 in 0i64..=4) {
        let pair = corpus_pair(pair_idx);
        let lam = if pair.g.rank == 1 {
            Weight::from_i64(&[c0])
        } else {
            Weight::from_i64(&[c0, c1])
        };
        let target = pair.g.norm_sq(&lam.add(&pair.g.rho()));
        for e in multiplet(&pair, &lam).unwrap() {
            prop_assert_eq!(pair.g.norm_sq(&e.mu.add(&pair.rho_h)), target.clone());
        }
    }
}
