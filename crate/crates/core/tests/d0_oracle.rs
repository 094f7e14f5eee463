mod common;

use std::collections::BTreeSet;

use common::*;
use proptest::prelude::*;
use rand::Rng;
use zerosum_core::property_d::is_d0_sequence_zero_sum;
use zerosum_core::{
    d0_compose, verify_d0, Budget, D0Outcome, DirectOracle, GroupElement, GroupSequence, GroupSpec,
    SearchCheckpoint,
};

fn holds(n: u64, r: usize, c: u64) -> D0Outcome {
    let g = GroupSpec::homocyclic(n, r).unwrap();
    verify_d0(&g, c, &Budget::unlimited(), None)
        .unwrap()
        .outcome
}

/// Whether `seq` has `len` terms summing to zero, by a reachable-set DP.
fn dp_has(factors: &[u64], seq: &[Vec<u64>], len: usize) -> bool {
    let mut states = BTreeSet::from([(0, vec![0; factors.len()])]);
    for x in seq {
        let next: Vec<_> = states
            .iter()
            .filter(|(k, _)| *k < len)
            .map(|(k, s)| (k + 1, add(factors, s, x)))
            .collect();
        states.extend(next);
    }
    states.contains(&(len, vec![0; factors.len()]))
}

#[test]
fn verifier_agrees_with_enumeration() {
    let cases: &[(u64, usize, &[u64])] = &[
        (2, 1, &[1, 2]),
        (3, 1, &[1, 2, 3]),
        (5, 1, &[1, 2, 3]),
        (2, 2, &[1, 2, 3, 4]),
        (3, 2, &[2, 3, 4]),
        (4, 2, &[2, 3, 4]),
        (5, 2, &[3, 4]),
        (3, 3, &[3, 4]),
    ];
    for &(n, r, cs) in cases {
        for &c in cs {
            let outcome = holds(n, r, c);
            let expect = naive_d0(n, r, c);
            assert_eq!(
                outcome == D0Outcome::Holds,
                expect,
                "C_{n}^{r}, c = {c}: {outcome:?}"
            );
            if let D0Outcome::Counterexample { g, t } = outcome {
                assert_eq!(t.len(), c);
                let mut seq: Vec<Vec<u64>> = t.elements().map(|e| e.coords().to_vec()).collect();
                seq = seq
                    .iter()
                    .flat_map(|x| std::iter::repeat_n(x.clone(), n as usize - 1))
                    .collect();
                seq.push(g.coords().to_vec());
                assert!(!dp_has(&vec![n; r], &seq, n as usize));
            }
        }
    }
}

#[test]
fn cyclic_negative_control() {
    match holds(2, 1, 1) {
        D0Outcome::Counterexample { g, t } => {
            assert!(g.is_zero());
            assert_eq!(
                t.to_text(),
                GroupSequence::from_coords(t.group(), &[&[1]])
                    .unwrap()
                    .to_text()
            );
        }
        other => panic!("expected a counterexample, got {other:?}"),
    }
}

/// `C_2^r` and `C_4^r` with `c = 2^r`: both factors hold, so the product must too.
#[test]
fn product_of_holding_factors_holds() {
    for r in 1..=2 {
        let c = 1 << r;
        assert_eq!(holds(2, r, c), D0Outcome::Holds);
        assert_eq!(holds(4, r, c), D0Outcome::Holds);
    }
    assert_eq!(holds(3, 2, 4), D0Outcome::Holds);
    assert_eq!(holds(9, 2, 4), D0Outcome::Holds);
}

fn compose_case() -> impl Strategy<Value = (u64, u64, usize, u64, u64)> {
    prop::sample::select(vec![
        (3u64, 3u64, 2usize, 4u64),
        (2, 2, 2, 4),
        (2, 3, 2, 4),
        (3, 2, 2, 4),
        (2, 2, 3, 8),
    ])
    .prop_flat_map(|(m, n, r, c)| (Just(m), Just(n), Just(r), Just(c), any::<u64>()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    /// The composed witness is a length-`mn` zero-sum part of `g_0·T^{mn−1}`.
    #[test]
    fn composition_yields_a_zero_sum((m, n, r, c, seed) in compose_case()) {
        let mn = m * n;
        let f = vec![mn; r];
        let g = group(&f);
        let mut rng = rng(seed);
        let g0 = g.element(&random_element(&mut rng, &f)).unwrap();
        let terms: Vec<GroupElement> = (0..c).map(|_| g.element(&random_element(&mut rng, &f)).unwrap()).collect();
        let t = GroupSequence::from_elements(&g, &terms).unwrap();
        let w = d0_compose(m, n, &g0, &t, &DirectOracle, &DirectOracle).unwrap();
        prop_assert_eq!(w.len(), mn);
        let total = w.elements().fold(vec![0; r], |acc, e| add(&f, &acc, e.coords()));
        prop_assert!(total.iter().all(|&x| x == 0));
        let mut whole = t.power(mn - 1);
        whole.push(g0.clone()).unwrap();
        prop_assert!(w.is_subsequence_of(&whole));
        prop_assert!(is_d0_sequence_zero_sum(&g0, &t));
    }
}

/// Runs `verify_d0` in slices of random node budgets below `max_slice`,
/// round-tripping the checkpoint through JSON between slices.
fn run_in_slices(g: &GroupSpec, c: u64, seed: u64, max_slice: u64) -> (D0Outcome, u64, usize) {
    let mut rng = rng(seed);
    let mut ck: Option<SearchCheckpoint> = None;
    let mut slices = 0;
    loop {
        let budget = Budget::nodes(rng.gen_range(1..=max_slice));
        let v = verify_d0(g, c, &budget, ck.take()).unwrap();
        slices += 1;
        match v.checkpoint {
            Some(next) => ck = Some(SearchCheckpoint::from_json(&next.to_json()).unwrap()),
            None => return (v.outcome, v.orbits_tested, slices),
        }
    }
}

#[test]
fn resumed_runs_match_uninterrupted_runs() {
    for (n, r, c) in [(3, 3, 9), (3, 3, 8), (5, 2, 4), (4, 2, 3)] {
        let g = GroupSpec::homocyclic(n, r).unwrap();
        let whole = verify_d0(&g, c, &Budget::unlimited(), None).unwrap();
        for seed in 0..3 {
            let (outcome, orbits, slices) =
                run_in_slices(&g, c, 0xd0 + seed, (whole.nodes_explored / 3).max(2));
            assert_eq!(outcome, whole.outcome, "C_{n}^{r}, c = {c}, seed {seed}");
            if whole.outcome == D0Outcome::Holds {
                assert_eq!(orbits, whole.orbits_tested);
                assert!(slices > 1, "budget never interrupted C_{n}^{r}");
            }
        }
    }
}

#[test]
fn mismatched_checkpoints_are_rejected() {
    let g = GroupSpec::homocyclic(3, 3).unwrap();
    let ck = verify_d0(&g, 9, &Budget::nodes(10), None)
        .unwrap()
        .checkpoint
        .unwrap();
    assert!(verify_d0(&g, 8, &Budget::unlimited(), Some(ck.clone())).is_err());
    let other = GroupSpec::homocyclic(5, 3).unwrap();
    assert!(verify_d0(&other, 9, &Budget::unlimited(), Some(ck)).is_err());
}
