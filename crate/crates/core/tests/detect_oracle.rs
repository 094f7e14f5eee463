mod common;

use common::*;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;
use zerosum_core::{
    find_nonempty_zero_sum, find_zero_sum_fixed_length, has_nonempty_zero_sum,
    has_zero_sum_fixed_length, GroupSequence, GroupSpec,
};

fn check_witness(w: &GroupSequence, s: &GroupSequence, len: Option<u64>) {
    assert!(w.is_zero_sum(), "witness {w} does not sum to zero");
    assert!(w.is_subsequence_of(s), "witness {w} is not part of {s}");
    match len {
        Some(l) => assert_eq!(w.len(), l),
        None => assert!(!w.is_empty()),
    }
}

#[test]
fn detectors_agree_with_enumeration_on_1000_instances() {
    let groups: Vec<Vec<u64>> = groups_up_to(27);
    let mut rng = rng(0x5eed_0001);
    let mut disagreements = 0;
    for _ in 0..1000 {
        let factors = groups.choose(&mut rng).unwrap();
        let g = group(factors);
        let len = rng.gen_range(0..=12);
        let s = random_sequence(&mut rng, &g, len);
        let target = rng.gen_range(1..=len as u64 + 1);
        let counts = to_counts(&s);

        let expect = naive_zero_sum(factors, &counts, Some(target));
        if has_zero_sum_fixed_length(&s, target) != expect {
            disagreements += 1;
        }
        match find_zero_sum_fixed_length(&s, target) {
            Some(w) => check_witness(&w, &s, Some(target)),
            None => assert!(
                !expect,
                "finder missed a zero-sum of length {target} in {s}"
            ),
        }

        let expect = naive_zero_sum(factors, &counts, None);
        if has_nonempty_zero_sum(&s) != expect {
            disagreements += 1;
        }
        match find_nonempty_zero_sum(&s) {
            Some(w) => check_witness(&w, &s, None),
            None => assert!(!expect),
        }
    }
    assert_eq!(disagreements, 0);
}

fn small_group() -> impl Strategy<Value = GroupSpec> {
    prop::sample::select(groups_up_to(27)).prop_map(|f| GroupSpec::new(&f).unwrap())
}

fn group_and_sequence() -> impl Strategy<Value = (GroupSpec, GroupSequence, u64)> {
    (small_group(), any::<u64>(), 0usize..=10).prop_map(|(g, seed, len)| {
        let mut r = rng(seed);
        let s = random_sequence(&mut r, &g, len);
        let extra = r.gen_range(0..g.order());
        (g, s, extra)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    /// Appending a term never destroys a zero-sum subsequence.
    #[test]
    fn detection_is_monotone((g, s, extra) in group_and_sequence(), target in 1u64..=6) {
        let mut longer = s.clone();
        longer.push(g.element_at(extra).unwrap()).unwrap();
        if has_zero_sum_fixed_length(&s, target) {
            prop_assert!(has_zero_sum_fixed_length(&longer, target));
        }
        if has_nonempty_zero_sum(&s) {
            prop_assert!(has_nonempty_zero_sum(&longer));
        }
    }

    /// Shifting every term by `h` changes a length-`exp(G)` sum by `exp(G)·h = 0`.
    #[test]
    fn exponent_length_detection_is_translation_invariant((g, s, extra) in group_and_sequence()) {
        let h = g.element_at(extra).unwrap();
        let shifted = s.shift(&h).unwrap();
        let n = g.exponent();
        prop_assert_eq!(has_zero_sum_fixed_length(&s, n), has_zero_sum_fixed_length(&shifted, n));
    }
}
