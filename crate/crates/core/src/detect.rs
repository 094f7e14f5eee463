//! Zero-sum detection by reachability dynamic programming.
//!
//! Two predicates drive everything else: "has a zero-sum subsequence of
//! length exactly `L`" (the Erdős–Ginzburg–Ziv predicate at `L = exp(G)`)
//! and "has a nonempty zero-sum subsequence" (the Davenport predicate).
//! Both come in a one-shot form over [`GroupSequence`] and an incremental
//! form over packed indices that searches push and pop element by element.

use crate::group::PackedGroup;
use crate::sequence::GroupSequence;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) struct BitSet {
    words: Vec<u64>,
}

impl BitSet {
    pub fn new(bits: usize) -> Self {
        Self {
            words: vec![0; bits.div_ceil(64)],
        }
    }

    #[inline]
    pub fn insert(&mut self, i: u32) {
        self.words[(i >> 6) as usize] |= 1 << (i & 63);
    }

    #[inline]
    pub fn contains(&self, i: u32) -> bool {
        self.words[(i >> 6) as usize] >> (i & 63) & 1 == 1
    }

    pub fn ones(&self) -> impl Iterator<Item = u32> + '_ {
        self.words.iter().enumerate().flat_map(|(w, &word)| {
            let mut bits = word;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let t = bits.trailing_zeros();
                bits &= bits - 1;
                Some((w as u32) << 6 | t)
            })
        })
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }
}

/// `dst ∪= src + x`.
fn or_shifted(group: &PackedGroup, dst: &mut BitSet, src: &BitSet, x: u32) {
    for s in src.ones() {
        dst.insert(group.add(s, x));
    }
}

/// Incremental detector for zero-sum subsequences of a fixed length.
///
/// `layers[k]` holds the sums of all `k`-term subsequences for `k < target`.
/// A zero-sum of length `target` appears when a new term `x` meets `-x` in
/// the last layer. Pushing a term that creates one is refused, so the state
/// always describes a sequence without such a subsequence.
#[derive(Clone, Debug)]
pub struct FixedLengthState<'g> {
    group: &'g PackedGroup,
    target: usize,
    layers: Vec<BitSet>,
    history: Vec<Vec<BitSet>>,
}

impl<'g> FixedLengthState<'g> {
    pub fn new(group: &'g PackedGroup, target: usize) -> Self {
        let mut layers = vec![BitSet::new(group.order() as usize); target];
        if target > 0 {
            layers[0].insert(0);
        }
        Self {
            group,
            target,
            layers,
            history: Vec::new(),
        }
    }

    /// Would appending `x` create a zero-sum subsequence of length `target`?
    #[inline]
    pub fn completes(&self, x: u32) -> bool {
        match self.target {
            0 => true,
            t => self.layers[t - 1].contains(self.group.neg(x)),
        }
    }

    /// Appends `x` unless that creates a zero-sum of the target length.
    /// Returns whether `x` was accepted.
    pub fn push(&mut self, x: u32) -> bool {
        if self.completes(x) {
            return false;
        }
        self.history.push(self.layers.clone());
        for k in (1..self.target).rev() {
            let (lo, hi) = self.layers.split_at_mut(k);
            or_shifted(self.group, &mut hi[0], &lo[k - 1], x);
        }
        true
    }

    /// Appends `count` copies of `x`, all or nothing.
    pub fn push_copies(&mut self, x: u32, count: usize) -> bool {
        let saved = self.layers.clone();
        for i in 0..count {
            if !self.push(x) {
                for _ in 0..i {
                    self.history.pop();
                }
                self.layers = saved;
                return false;
            }
        }
        // collapse the per-copy snapshots into one
        for _ in 1..count {
            self.history.pop();
        }
        if count > 0 {
            *self.history.last_mut().expect("pushed at least once") = saved;
        }
        true
    }

    /// Undoes the last accepted `push` or `push_copies`.
    pub fn pop(&mut self) {
        self.layers = self.history.pop().expect("pop without matching push");
    }

    pub fn depth(&self) -> usize {
        self.history.len()
    }

    pub(crate) fn digest(&self) -> u64 {
        digest_layers(&self.layers)
    }
}

/// Incremental detector for nonempty zero-sum subsequences.
#[derive(Clone, Debug)]
pub struct SubsetSumState<'g> {
    group: &'g PackedGroup,
    reach: BitSet,
    history: Vec<BitSet>,
}

impl<'g> SubsetSumState<'g> {
    pub fn new(group: &'g PackedGroup) -> Self {
        Self {
            group,
            reach: BitSet::new(group.order() as usize),
            history: Vec::new(),
        }
    }

    pub fn completes(&self, x: u32) -> bool {
        x == 0 || self.reach.contains(self.group.neg(x))
    }

    /// Appends `x` unless the sequence would gain a nonempty zero-sum subsequence.
    pub fn push(&mut self, x: u32) -> bool {
        if self.completes(x) {
            return false;
        }
        self.history.push(self.reach.clone());
        let prev = self.history.last().expect("just pushed");
        or_shifted(self.group, &mut self.reach, prev, x);
        self.reach.insert(x);
        true
    }

    pub fn pop(&mut self) {
        self.reach = self.history.pop().expect("pop without matching push");
    }

    pub(crate) fn digest(&self) -> u64 {
        digest_layers(std::slice::from_ref(&self.reach))
    }
}

/// FNV-1a over the DP words; stable across runs and platforms.
pub(crate) fn digest_layers(layers: &[BitSet]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for layer in layers {
        for w in layer.words() {
            for b in w.to_le_bytes() {
                h ^= b as u64;
                h = h.wrapping_mul(0x0000_0100_0000_01b3);
            }
        }
    }
    h
}

fn packed_counts(seq: &GroupSequence, group: &PackedGroup) -> Vec<(u32, u64)> {
    seq.counts().map(|(e, k)| (group.index(e), k)).collect()
}

/// Is there a subsequence `T` of `S` with `|T| = len` and `σ(T) = 0`?
///
/// The empty subsequence counts for `len = 0`.
pub fn has_zero_sum_fixed_length(seq: &GroupSequence, len: u64) -> bool {
    if len == 0 {
        return true;
    }
    if len > seq.len() {
        return false;
    }
    let group = PackedGroup::new(seq.group()).expect("sequence group fits packed search");
    let mut state = FixedLengthState::new(&group, len as usize);
    for (x, k) in packed_counts(seq, &group) {
        // more than `len` copies never help
        for _ in 0..k.min(len) {
            if !state.push(x) {
                return true;
            }
        }
    }
    false
}

/// Like [`has_zero_sum_fixed_length`] but returns a witness `T ≤ S`.
pub fn find_zero_sum_fixed_length(seq: &GroupSequence, len: u64) -> Option<GroupSequence> {
    if len == 0 {
        return Some(GroupSequence::empty(seq.group()));
    }
    if len > seq.len() {
        return None;
    }
    let group = PackedGroup::new(seq.group()).expect("sequence group fits packed search");
    let counts = packed_counts(seq, &group);
    let l = len as usize;
    let order = group.order() as usize;

    // tables[i][k]: sums of k-term subsequences using the first i distinct elements
    let mut tables: Vec<Vec<BitSet>> = Vec::with_capacity(counts.len() + 1);
    let mut base = vec![BitSet::new(order); l + 1];
    base[0].insert(0);
    tables.push(base);
    for &(x, mult) in &counts {
        let prev = tables.last().expect("base layer");
        let mut next = prev.clone();
        // bounded knapsack: add up to `mult` copies of x
        let mut cur = prev.clone();
        for _ in 0..mult.min(len) {
            let mut shifted = vec![BitSet::new(order); l + 1];
            for k in 1..=l {
                or_shifted(&group, &mut shifted[k], &cur[k - 1], x);
            }
            for k in 0..=l {
                for s in shifted[k].ones() {
                    next[k].insert(s);
                }
            }
            cur = shifted;
        }
        tables.push(next);
    }
    if !tables.last().expect("at least one table")[l].contains(0) {
        return None;
    }

    // walk back choosing how many copies of each element to take
    let mut picked = Vec::new();
    let (mut k, mut sum) = (l, 0u32);
    for i in (0..counts.len()).rev() {
        let (x, mult) = counts[i];
        let prev = &tables[i];
        let mut take = 0usize;
        let mut s = sum;
        loop {
            if prev[k - take].contains(s) {
                break;
            }
            take += 1;
            assert!(
                take as u64 <= mult.min(k as u64),
                "back-pointer walk lost the witness"
            );
            s = group.sub(s, x);
        }
        picked.extend(std::iter::repeat_n(x, take));
        k -= take;
        sum = s;
        if k == 0 {
            break;
        }
    }
    debug_assert_eq!((k, sum), (0, 0));
    Some(GroupSequence::from_packed(&group, &picked))
}

/// Does `S` have a nonempty zero-sum subsequence?
pub fn has_nonempty_zero_sum(seq: &GroupSequence) -> bool {
    find_nonempty_zero_sum(seq).is_some()
}

/// Returns some nonempty zero-sum subsequence of `S`, if any.
pub fn find_nonempty_zero_sum(seq: &GroupSequence) -> Option<GroupSequence> {
    let group = PackedGroup::new(seq.group()).expect("sequence group fits packed search");
    let order = group.order() as usize;
    // terms processed one copy at a time; reach records the term that first hit each sum
    let mut terms = Vec::new();
    for (x, k) in packed_counts(seq, &group) {
        // ord(x) copies of x already sum to zero
        let ord = group
            .spec()
            .order_of(&group.element(x))
            .expect("valid element");
        terms.extend(std::iter::repeat_n(x, k.min(ord) as usize));
    }
    // parent[s] = (term index that first reached s, previous sum or NONE)
    const NONE: u32 = u32::MAX;
    let mut parent: Vec<Option<(usize, u32)>> = vec![None; order];
    for (i, &x) in terms.iter().enumerate() {
        let reached: Vec<u32> = (0..order as u32)
            .filter(|&s| parent[s as usize].is_some_and(|(j, _)| j < i))
            .collect();
        let mut candidates = vec![(x, NONE)];
        candidates.extend(reached.iter().map(|&s| (group.add(s, x), s)));
        for (target, from) in candidates {
            if target == 0 {
                // walk back to collect the terms
                let mut picked = vec![x];
                let mut s = from;
                while s != NONE {
                    let (j, prev) = parent[s as usize].expect("reached sum has a parent");
                    picked.push(terms[j]);
                    s = prev;
                }
                return Some(GroupSequence::from_packed(&group, &picked));
            }
            if parent[target as usize].is_none() {
                parent[target as usize] = Some((i, from));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupSpec;

    fn seq(g: &GroupSpec, coords: &[&[u64]]) -> GroupSequence {
        GroupSequence::from_coords(g, coords).unwrap()
    }

    #[test]
    fn identity_run_has_fixed_length_zero_sum() {
        for (n, r) in [(3, 1), (3, 2), (4, 2), (5, 1)] {
            let g = GroupSpec::homocyclic(n, r).unwrap();
            let mut s = GroupSequence::empty(&g);
            s.push_n(g.zero(), n).unwrap();
            assert!(has_zero_sum_fixed_length(&s, n));
        }
    }

    #[test]
    fn harborth_sequence_over_c3_squared() {
        // ∏_{v ∈ {0,1}^2} v^2, length 8
        let g = GroupSpec::homocyclic(3, 2).unwrap();
        let s = GroupSequence::from_counts(
            &g,
            [[0, 0], [0, 1], [1, 0], [1, 1]]
                .iter()
                .map(|c| (g.element(c).unwrap(), 2)),
        )
        .unwrap();
        assert_eq!(s.len(), 8);
        assert!(!has_zero_sum_fixed_length(&s, 3));
        assert!(find_zero_sum_fixed_length(&s, 3).is_none());
    }

    #[test]
    fn c5_direct_sums() {
        let c5 = GroupSpec::cyclic(5).unwrap();
        let s = seq(&c5, &[&[1], &[1], &[1], &[1], &[3]]);
        assert!(!has_zero_sum_fixed_length(&s, 5));
        let s = seq(&c5, &[&[1], &[1], &[1], &[1], &[0]]);
        assert!(!has_zero_sum_fixed_length(&s, 5));
        let s = seq(&c5, &[&[1], &[1], &[1], &[1], &[1]]);
        assert!(has_zero_sum_fixed_length(&s, 5));
    }

    #[test]
    fn length_zero_and_too_long() {
        let c3 = GroupSpec::cyclic(3).unwrap();
        let s = seq(&c3, &[&[1], &[1]]);
        assert!(has_zero_sum_fixed_length(&s, 0));
        assert!(!has_zero_sum_fixed_length(&s, 3));
        assert!(find_zero_sum_fixed_length(&s, 3).is_none());
        assert_eq!(find_zero_sum_fixed_length(&s, 0).unwrap().len(), 0);
    }

    #[test]
    fn witnesses() {
        let c3 = GroupSpec::cyclic(3).unwrap();
        let s = seq(&c3, &[&[0], &[0], &[0]]);
        assert_eq!(find_zero_sum_fixed_length(&s, 3).unwrap(), s);

        let s = seq(&c3, &[&[1], &[2], &[0], &[1], &[1]]);
        let t = find_zero_sum_fixed_length(&s, 3).unwrap();
        let a = seq(&c3, &[&[0], &[1], &[2]]);
        let b = seq(&c3, &[&[1], &[1], &[1]]);
        assert!(t == a || t == b, "unexpected witness {t}");
    }

    #[test]
    fn nonempty_zero_sum_examples() {
        for n in 2..8 {
            let c = GroupSpec::cyclic(n).unwrap();
            let one = c.element(&[1]).unwrap();
            let mut s = GroupSequence::empty(&c);
            s.push_n(one.clone(), n - 1).unwrap();
            assert!(!has_nonempty_zero_sum(&s));
            s.push(one).unwrap();
            assert!(has_nonempty_zero_sum(&s));
        }
        let g = GroupSpec::homocyclic(2, 2).unwrap();
        let s = seq(&g, &[&[1, 0], &[0, 1], &[1, 1]]);
        let w = find_nonempty_zero_sum(&s).unwrap();
        assert!(w.is_zero_sum() && !w.is_empty() && w.is_subsequence_of(&s));
    }

    #[test]
    fn incremental_push_pop_restores_state() {
        let g = GroupSpec::homocyclic(3, 2).unwrap();
        let p = PackedGroup::new(&g).unwrap();
        let mut st = FixedLengthState::new(&p, 3);
        let d0 = st.digest();
        assert!(st.push(1));
        let d1 = st.digest();
        assert!(st.push_copies(4, 2));
        assert!(!st.push(7), "1 + 4 + 7 = (0,1)+(1,1)+(2,1) = (0,0)");
        st.pop();
        assert_eq!(st.digest(), d1);
        st.pop();
        assert_eq!(st.digest(), d0);
        assert_eq!(st.depth(), 0);
        // refused multi-push leaves no trace
        assert!(st.push(1));
        assert!(!st.push_copies(1, 2));
        assert_eq!(st.digest(), d1);
        assert_eq!(st.depth(), 1);
    }

    #[test]
    fn subset_sum_state_refuses_zero_sums() {
        let c5 = GroupSpec::cyclic(5).unwrap();
        let p = PackedGroup::new(&c5).unwrap();
        let mut st = SubsetSumState::new(&p);
        assert!(!st.push(0));
        assert!(st.push(2));
        assert!(st.push(2));
        assert!(!st.push(1), "2 + 2 + 1 = 0");
        assert!(st.push(4));
        assert!(!st.push(3));
        st.pop();
        st.pop();
        assert!(!st.push(3), "2 + 3 = 0");
        assert!(st.push(1));
    }
}
