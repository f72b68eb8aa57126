use proptest::prelude::*;

use urd_core::spectrum::{
    add, d, dbar, iset, necessary_ok, oracle_enumerate, repeat, Profile, TripleSet,
};
use urd_core::verify::verify_counts;

fn small_set() -> impl Strategy<Value = TripleSet> {
    proptest::collection::vec((0u32..30, 0u32..10, 0u32..10), 1..6).prop_map(|v| {
        v.into_iter()
            .map(|(r, s, t)| Profile::new(r, 3 * s, 2 * t))
            .collect()
    })
}

proptest! {
    #[test]
    fn table_spectrum_matches_enumeration(k in 1u32..=40) {
        let v = 12 * k;
        prop_assert_eq!(d(v).unwrap(), oracle_enumerate(v));
    }

    #[test]
    fn admissible_profiles_satisfy_the_count_identity(v in 2u32..200, r in 0u32..200, s in 0u32..80, t in 0u32..80) {
        let p = Profile::new(r, s, t);
        if necessary_ok(v, p).ok {
            prop_assert!(verify_counts(v as u64, p));
        }
    }

    #[test]
    fn set_addition_is_commutative_and_associative(a in small_set(), b in small_set(), c in small_set()) {
        prop_assert_eq!(add(&a, &b), add(&b, &a));
        prop_assert_eq!(add(&add(&a, &b), &c), add(&a, &add(&b, &c)));
    }

    #[test]
    fn repeat_splits_additively(x in small_set(), h in 1usize..4, g in 1usize..4) {
        prop_assert_eq!(repeat(h + g, &x), add(&repeat(h, &x), &repeat(g, &x)));
    }

    #[test]
    fn members_of_d_are_admissible(k in 1u32..=10, pick in 0usize..1000) {
        let v = 12 * k;
        let set = d(v).unwrap();
        let p = *set.iter().nth(pick % set.len()).unwrap();
        prop_assert!(necessary_ok(v, p).ok);
        prop_assert!(!necessary_ok(v, Profile::new(p.r + 1, p.s, p.t)).ok);
    }
}

#[test]
fn gdd_spectra_are_repeated_sums() {
    let base = dbar(1, 2);
    for h in 1..=4 {
        assert_eq!(repeat(h, &base), dbar(1, h as u32 + 1), "h = {h}");
    }
}

#[test]
fn generating_sets_lie_in_their_blow_up_sets() {
    let q = iset::q();
    let pair = |a: usize, b: usize| iset::i(a).union(&iset::i(b));
    let c5 = |n: u32| TripleSet::singleton(Profile::new(0, 9 * n, 0));
    assert!(pair(1, 2).is_subset(&repeat(8, &q)));
    assert!(pair(3, 4).is_subset(&add(&repeat(6, &q), &c5(1))));
    assert!(pair(5, 6).is_subset(&add(&repeat(4, &q), &c5(2))));
    assert!(pair(7, 8).is_subset(&repeat(6, &iset::w())));
}

#[test]
fn sixty_is_covered_by_the_generating_sets() {
    let d12 = d(12).unwrap();
    let d20: TripleSet = (0..=6)
        .map(|x| Profile::new(19 - 3 * x, 0, 2 * x))
        .collect();
    let covered = add(&iset::union_1_to_8(), &d12)
        .union(&add(&iset::i(9), &d20))
        .union(&TripleSet::singleton(Profile::new(0, 33, 10)));
    assert!(d(60).unwrap().is_subset(&covered));
}
