//! Exact values of D, s and g by exhaustive extremal-sequence search.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::canon::{Reducer, Symmetry};
use crate::detect::{FixedLengthState, SubsetSumState};
use crate::engine::{Budget, Collector, Constraint, Engine, Flow, Meter, RunEnd, SearchStats};
use crate::error::{Error, Result};
use crate::group::{GroupSpec, PackedGroup};
use crate::sequence::GroupSequence;

/// The zero-sum invariants this crate computes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Invariant {
    /// Davenport constant: every sequence this long has a nonempty zero-sum subsequence.
    #[serde(rename = "D")]
    Davenport,
    /// Erdős–Ginzburg–Ziv constant: every sequence this long has a zero-sum
    /// subsequence of length `exp(G)`.
    #[serde(rename = "s")]
    Egz,
    /// The squarefree analogue of `s`.
    #[serde(rename = "g")]
    Squarefree,
}

impl Invariant {
    pub fn symbol(self) -> &'static str {
        match self {
            Invariant::Davenport => "D",
            Invariant::Egz => "s",
            Invariant::Squarefree => "g",
        }
    }
}

impl fmt::Display for Invariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl FromStr for Invariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "D" | "d" => Ok(Invariant::Davenport),
            "s" | "S" => Ok(Invariant::Egz),
            "g" | "G" => Ok(Invariant::Squarefree),
            other => Err(Error::InvalidArgument(format!(
                "unknown invariant {other:?}; expected D, s or g"
            ))),
        }
    }
}

/// A computed invariant value together with its witnesses.
///
/// The listed sequences have length `value − 1` and avoid the invariant's
/// zero-sum predicate, so they prove `value` is a lower bound. When
/// `exhaustive` is set the search also covered every longer candidate, which
/// proves the upper bound; the list then holds one representative per orbit
/// of maximal sequences under the symmetry the search used.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtremalCertificate {
    pub invariant: Invariant,
    pub group: GroupSpec,
    pub value: u64,
    pub extremal_sequences: Vec<GroupSequence>,
    pub exhaustive: bool,
    /// Whether orbits were taken under the full automorphism group. When not,
    /// witnesses are listed up to a subgroup and may repeat a full orbit.
    pub full_symmetry: bool,
    pub stats: SearchStats,
}

impl ExtremalCertificate {
    /// Re-checks every witness with the one-shot detectors.
    pub fn witnesses_hold(&self) -> bool {
        let n = self.group.exponent();
        self.extremal_sequences.iter().all(|s| {
            s.group() == &self.group
                && s.len() + 1 == self.value
                && match self.invariant {
                    Invariant::Davenport => !crate::detect::has_nonempty_zero_sum(s),
                    Invariant::Egz => !crate::detect::has_zero_sum_fixed_length(s, n),
                    Invariant::Squarefree => {
                        s.is_squarefree() && !crate::detect::has_zero_sum_fixed_length(s, n)
                    }
                }
        })
    }
}

impl Constraint for FixedLengthState<'_> {
    fn try_push(&mut self, x: u32) -> bool {
        self.push(x)
    }
    fn pop(&mut self) {
        FixedLengthState::pop(self)
    }
    fn digest(&self) -> u64 {
        FixedLengthState::digest(self)
    }
}

impl Constraint for SubsetSumState<'_> {
    fn try_push(&mut self, x: u32) -> bool {
        self.push(x)
    }
    fn pop(&mut self) {
        SubsetSumState::pop(self)
    }
    fn digest(&self) -> u64 {
        SubsetSumState::digest(self)
    }
}

/// Keeps the longest sequences seen.
#[derive(Default)]
pub(crate) struct Longest {
    pub len: usize,
    pub seqs: Vec<Vec<u32>>,
}

impl Collector for Longest {
    fn visit(&mut self, seq: &[u32]) -> Flow {
        if seq.len() > self.len {
            self.len = seq.len();
            self.seqs.clear();
        }
        if seq.len() == self.len {
            self.seqs.push(seq.to_vec());
        }
        Flow::Continue
    }
}

impl Longest {
    pub fn merge(&mut self, other: Longest) {
        if other.len > self.len {
            *self = other;
        } else if other.len == self.len {
            self.seqs.extend(other.seqs);
        }
    }
}

const SHARD_DEPTH: usize = 2;

pub(crate) fn extremal<C: Constraint + Sync>(
    invariant: Invariant,
    engine: Engine<'_, C>,
    budget: &Budget,
) -> Result<ExtremalCertificate> {
    let group = engine.group;
    let mut best = Longest {
        len: 0,
        seqs: vec![Vec::new()],
    };
    let prefix = engine.prefix(SHARD_DEPTH, &mut best);
    let mut stats = prefix.stats;
    let meter = Meter::new(budget);
    let cursors = prefix
        .shards
        .iter()
        .map(|s| (engine.cursor_at(s), SearchStats::default()))
        .collect();
    let mut exhaustive = true;
    for run in engine.run_all(cursors, &meter, |_| Longest::default()) {
        exhaustive &= run.end == RunEnd::Exhausted;
        stats += run.stats;
        best.merge(run.collector);
    }
    best.seqs.sort();
    best.seqs.dedup();
    let cert = ExtremalCertificate {
        invariant,
        group: group.spec().clone(),
        value: best.len as u64 + 1,
        extremal_sequences: best
            .seqs
            .iter()
            .map(|s| GroupSequence::from_packed(group, s))
            .collect(),
        exhaustive,
        full_symmetry: engine.reducer.is_exact(),
        stats,
    };
    if exhaustive {
        Ok(cert)
    } else {
        Err(Error::BudgetExceeded(Box::new(cert)))
    }
}

/// `D(G)`: one more than the longest zero-sum-free sequence.
///
/// Orbits are taken under automorphisms only; translations do not preserve
/// zero-sum-freeness.
pub fn davenport(group: &GroupSpec, budget: &Budget) -> Result<ExtremalCertificate> {
    let packed = PackedGroup::new(group)?;
    let engine = Engine {
        group: &packed,
        reducer: Reducer::new(&packed, Symmetry::Linear),
        root: SubsetSumState::new(&packed),
        strict: false,
        max_depth: usize::MAX,
    };
    extremal(Invariant::Davenport, engine, budget)
}

/// `s(G)`: one more than the longest sequence without a zero-sum
/// subsequence of length `exp(G)`.
pub fn egz_constant(group: &GroupSpec, budget: &Budget) -> Result<ExtremalCertificate> {
    fixed_length_search(group, Invariant::Egz, false, budget)
}

/// `g(G)`: as [`egz_constant`] over squarefree sequences.
pub fn g_constant(group: &GroupSpec, budget: &Budget) -> Result<ExtremalCertificate> {
    fixed_length_search(group, Invariant::Squarefree, true, budget)
}

fn fixed_length_search(
    group: &GroupSpec,
    invariant: Invariant,
    squarefree: bool,
    budget: &Budget,
) -> Result<ExtremalCertificate> {
    let packed = PackedGroup::new(group)?;
    let engine = Engine {
        group: &packed,
        reducer: Reducer::new(&packed, Symmetry::Affine),
        root: FixedLengthState::new(&packed, group.exponent() as usize),
        strict: squarefree,
        max_depth: usize::MAX,
    };
    extremal(invariant, engine, budget)
}

/// Checks `g ≤ s ≤ (g − 1)(exp(G) − 1) + 1`.
pub fn check_prop41_chain(group: &GroupSpec, s_val: u64, g_val: u64) -> bool {
    let n = group.exponent();
    let upper = (g_val.saturating_sub(1) as u128) * (n.saturating_sub(1) as u128) + 1;
    g_val <= s_val && (s_val as u128) <= upper
}

/// `∏_{v ∈ {0,1}^r} v^{n−1}` over `C_n^r`, which has no zero-sum
/// subsequence of length `n` and so shows `s(C_n^r) ≥ 2^r(n−1)+1`.
pub fn lower_bound_witness(n: u64, r: usize) -> Result<GroupSequence> {
    let group = GroupSpec::homocyclic(n, r)?;
    if group.is_trivial() {
        return Ok(GroupSequence::empty(&group));
    }
    if r >= 32 {
        return Err(Error::GroupTooLarge);
    }
    let mut seq = GroupSequence::empty(&group);
    for mask in 0u64..(1 << r) {
        let coords: Vec<u64> = (0..r).map(|k| (mask >> k) & 1).collect();
        seq.push_n(group.element(&coords)?, n - 1)?;
    }
    Ok(seq)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(n: u64, r: usize) -> GroupSpec {
        GroupSpec::homocyclic(n, r).unwrap()
    }

    #[test]
    fn small_values() {
        let b = Budget::unlimited();
        assert_eq!(davenport(&c(5, 1), &b).unwrap().value, 5);
        assert_eq!(davenport(&c(3, 2), &b).unwrap().value, 5);
        assert_eq!(davenport(&c(2, 3), &b).unwrap().value, 4);
        assert_eq!(egz_constant(&c(5, 1), &b).unwrap().value, 9);
        assert_eq!(egz_constant(&c(3, 2), &b).unwrap().value, 9);
        assert_eq!(egz_constant(&c(2, 3), &b).unwrap().value, 9);
        assert_eq!(g_constant(&c(3, 2), &b).unwrap().value, 5);
        assert_eq!(g_constant(&c(3, 1), &b).unwrap().value, 3);
    }

    #[test]
    fn trivial_group_conventions() {
        let t = GroupSpec::trivial();
        let b = Budget::unlimited();
        assert_eq!(davenport(&t, &b).unwrap().value, 1);
        assert_eq!(egz_constant(&t, &b).unwrap().value, 1);
        assert_eq!(g_constant(&t, &b).unwrap().value, 1);
    }

    #[test]
    fn certificates_recheck() {
        let b = Budget::unlimited();
        for cert in [
            egz_constant(&c(3, 2), &b).unwrap(),
            davenport(&c(2, 3), &b).unwrap(),
            g_constant(&c(3, 2), &b).unwrap(),
        ] {
            assert!(cert.exhaustive);
            assert!(!cert.extremal_sequences.is_empty());
            assert!(cert.witnesses_hold(), "{cert:?}");
        }
    }

    #[test]
    fn node_budget_reports_partial_certificate() {
        match egz_constant(&c(3, 3), &Budget::nodes(50)) {
            Err(Error::BudgetExceeded(cert)) => {
                assert!(!cert.exhaustive);
                assert!(cert.value >= 1);
                assert!(cert.witnesses_hold());
            }
            other => panic!("expected budget exhaustion, got {other:?}"),
        }
    }

    #[test]
    fn chain_examples() {
        assert!(check_prop41_chain(&c(3, 2), 9, 5));
        assert!(!check_prop41_chain(&c(3, 2), 10, 5));
        let c5 = c(5, 1);
        assert!(!check_prop41_chain(&c5, 9, 2));
        assert!(check_prop41_chain(&c5, 9, 3));
    }

    #[test]
    fn invariant_parsing() {
        assert_eq!("s".parse::<Invariant>().unwrap(), Invariant::Egz);
        assert_eq!("D".parse::<Invariant>().unwrap(), Invariant::Davenport);
        assert!("x".parse::<Invariant>().is_err());
        assert_eq!(
            serde_json::to_string(&Invariant::Squarefree).unwrap(),
            "\"g\""
        );
    }
}
