//! Brute-force oracles shared by the integration tests.
//!
//! Arithmetic here works on raw coordinate vectors so that it does not
//! share code with the library under test.

#![allow(dead_code)]

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use zerosum_core::{GroupElement, GroupSequence, GroupSpec};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn group(factors: &[u64]) -> GroupSpec {
    GroupSpec::new(factors).unwrap()
}

/// All coordinate vectors of the group, in lexicographic order.
pub fn all_coords(factors: &[u64]) -> Vec<Vec<u64>> {
    let mut out = vec![vec![]];
    for &n in factors {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..n).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

pub fn add(factors: &[u64], a: &[u64], b: &[u64]) -> Vec<u64> {
    a.iter()
        .zip(b)
        .zip(factors)
        .map(|((x, y), n)| (x + y) % n)
        .collect()
}

pub fn scale(factors: &[u64], k: u64, a: &[u64]) -> Vec<u64> {
    a.iter()
        .zip(factors)
        .map(|(x, n)| (x * (k % n)) % n)
        .collect()
}

fn is_zero(v: &[u64]) -> bool {
    v.iter().all(|&x| x == 0)
}

/// Tries every choice `0 ≤ k_i ≤ m_i` with `Σ k_i = len` (or any positive
/// total when `len` is `None`) and tests `Σ k_i·x_i = 0`.
pub fn naive_zero_sum(factors: &[u64], counts: &[(Vec<u64>, u64)], len: Option<u64>) -> bool {
    fn go(
        factors: &[u64],
        counts: &[(Vec<u64>, u64)],
        i: usize,
        taken: u64,
        acc: Vec<u64>,
        len: Option<u64>,
    ) -> bool {
        if let Some(l) = len {
            if taken > l {
                return false;
            }
        }
        if i == counts.len() {
            return match len {
                Some(l) => taken == l && is_zero(&acc),
                None => taken > 0 && is_zero(&acc),
            };
        }
        let (x, m) = &counts[i];
        let mut acc_k = acc;
        for k in 0..=*m {
            if go(factors, counts, i + 1, taken + k, acc_k.clone(), len) {
                return true;
            }
            acc_k = add(factors, &acc_k, x);
        }
        false
    }
    go(factors, counts, 0, 0, vec![0; factors.len()], len)
}

/// Count vectors of multisets of size `size` over `k` elements with every
/// multiplicity at most `max_mult`.
pub fn multisets(k: usize, size: u64, max_mult: u64) -> Vec<Vec<u64>> {
    fn go(
        k: usize,
        i: usize,
        left: u64,
        max_mult: u64,
        cur: &mut Vec<u64>,
        out: &mut Vec<Vec<u64>>,
    ) {
        if i == k {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for m in 0..=left.min(max_mult) {
            cur.push(m);
            go(k, i + 1, left - m, max_mult, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(k, 0, size, max_mult, &mut Vec::new(), &mut out);
    out
}

fn counts_of(elems: &[Vec<u64>], mult: &[u64]) -> Vec<(Vec<u64>, u64)> {
    elems
        .iter()
        .zip(mult)
        .filter(|(_, &m)| m > 0)
        .map(|(e, &m)| (e.clone(), m))
        .collect()
}

/// Smallest `l` such that every multiset of size `l` satisfies `has`.
fn least_forcing_length(
    factors: &[u64],
    max_mult: u64,
    has: impl Fn(&[(Vec<u64>, u64)]) -> bool,
) -> u64 {
    let elems = all_coords(factors);
    let mut l = 1;
    loop {
        if multisets(elems.len(), l, max_mult)
            .iter()
            .all(|m| has(&counts_of(&elems, m)))
        {
            return l;
        }
        l += 1;
    }
}

/// Davenport constant by enumeration of all multisets.
pub fn naive_davenport(factors: &[u64]) -> u64 {
    least_forcing_length(factors, u64::MAX, |c| naive_zero_sum(factors, c, None))
}

/// `s(G)` by enumeration; multiplicities stay below `exp(G)` since `exp(G)`
/// copies of one element already sum to zero.
pub fn naive_egz(factors: &[u64]) -> u64 {
    let n = *factors.last().unwrap_or(&1);
    if n == 1 {
        return 1;
    }
    least_forcing_length(factors, n - 1, |c| naive_zero_sum(factors, c, Some(n)))
}

/// `g(G)` by enumeration of all subsets.
pub fn naive_g(factors: &[u64]) -> u64 {
    let n = *factors.last().unwrap_or(&1);
    let elems = all_coords(factors);
    for l in 1..=elems.len() as u64 {
        if multisets(elems.len(), l, 1)
            .iter()
            .all(|m| naive_zero_sum(factors, &counts_of(&elems, m), Some(n)))
        {
            return l;
        }
    }
    elems.len() as u64 + 1
}

/// Property D0 by brute force over every `g` and every multiset `T` of size `c`.
pub fn naive_d0(n: u64, r: usize, c: u64) -> bool {
    let factors = vec![n; r];
    let elems = all_coords(&factors);
    for t in multisets(elems.len(), c, c) {
        for g in &elems {
            let mut counts: Vec<(Vec<u64>, u64)> = elems
                .iter()
                .zip(&t)
                .map(|(e, &m)| (e.clone(), m * (n - 1) + u64::from(e == g)))
                .filter(|(_, m)| *m > 0)
                .collect();
            counts.sort();
            if !naive_zero_sum(&factors, &counts, Some(n)) {
                return false;
            }
        }
    }
    true
}

pub fn to_counts(seq: &GroupSequence) -> Vec<(Vec<u64>, u64)> {
    seq.counts()
        .map(|(e, k)| (e.coords().to_vec(), k))
        .collect()
}

pub fn random_element(rng: &mut impl Rng, factors: &[u64]) -> Vec<u64> {
    factors.iter().map(|&n| rng.gen_range(0..n)).collect()
}

pub fn random_sequence(rng: &mut impl Rng, g: &GroupSpec, len: usize) -> GroupSequence {
    let elems: Vec<GroupElement> = (0..len)
        .map(|_| g.element(&random_element(rng, g.factors())).unwrap())
        .collect();
    GroupSequence::from_elements(g, &elems).unwrap()
}

/// Nontrivial groups with order at most `max_order`, as invariant-factor chains.
pub fn groups_up_to(max_order: u64) -> Vec<Vec<u64>> {
    fn go(prefix: &mut Vec<u64>, order: u64, max_order: u64, out: &mut Vec<Vec<u64>>) {
        let last = *prefix.last().unwrap_or(&1);
        if !prefix.is_empty() {
            out.push(prefix.clone());
        }
        let mut next = if prefix.is_empty() { 2 } else { last };
        while order * next <= max_order {
            if next % last == 0 {
                prefix.push(next);
                go(prefix, order * next, max_order, out);
                prefix.pop();
            }
            next += 1;
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), 1, max_order, &mut out);
    out
}
