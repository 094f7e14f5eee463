//! Property D and Property D0.
//!
//! `C_n^r` has Property D0 with respect to `c` when every sequence
//! `g·T^{n−1}` with `|T| = c` has a zero-sum subsequence of length `n`.
//! The verifier searches for counterexamples. Translating by `−g` moves the
//! distinguished term to 0 without changing length-`n` zero-sums, so only
//! pairs `(0, T)` are examined, with `T` taken up to automorphisms. A
//! counterexample `T` must be a set of nonzero elements: a repeated term
//! or a zero term already yields `n` equal terms.

mod checkpoint;
mod compose;

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::canon::{Reducer, Symmetry};
use crate::detect::{has_zero_sum_fixed_length, FixedLengthState};
use crate::engine::{Budget, Collector, Constraint, Cursor, Engine, Flow, Meter, RunEnd};
use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupSpec, PackedGroup};
use crate::search::{ExtremalCertificate, Invariant};
use crate::sequence::GroupSequence;

pub use checkpoint::{
    FrontierFrame, SearchCheckpoint, ShardState, ShardStatus, CHECKPOINT_VERSION,
};
pub use compose::{d0_compose, D0Oracle, DirectOracle};

/// Default depth of the shard roots.
pub const DEFAULT_SHARD_DEPTH: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum D0Outcome {
    Holds,
    Counterexample { g: GroupElement, t: GroupSequence },
    Inconclusive,
}

/// Result of a Property D0 search.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct D0Verdict {
    pub group: GroupSpec,
    pub c: u64,
    pub outcome: D0Outcome,
    pub nodes_explored: u64,
    pub orbits_tested: u64,
    #[serde(with = "seconds")]
    pub elapsed: Duration,
    /// Present when the budget ran out before the search finished.
    #[serde(skip)]
    pub checkpoint: Option<SearchCheckpoint>,
}

mod seconds {
    use std::time::Duration;

    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(d.as_secs_f64())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Duration, D::Error> {
        let secs = f64::deserialize(d)?;
        Duration::try_from_secs_f64(secs).map_err(serde::de::Error::custom)
    }
}

/// DP state for `0·T^{n−1}`: each pushed term enters `n − 1` times.
#[derive(Clone)]
struct PoweredTerms<'g> {
    dp: FixedLengthState<'g>,
    copies: usize,
}

impl<'g> PoweredTerms<'g> {
    fn new(group: &'g PackedGroup) -> Self {
        let n = group.spec().exponent() as usize;
        let mut dp = FixedLengthState::new(group, n);
        let accepted = dp.push(0);
        debug_assert!(accepted || n == 1);
        Self { dp, copies: n - 1 }
    }
}

impl Constraint for PoweredTerms<'_> {
    fn try_push(&mut self, x: u32) -> bool {
        self.dp.push_copies(x, self.copies)
    }
    fn pop(&mut self) {
        self.dp.pop()
    }
    fn digest(&self) -> u64 {
        self.dp.digest()
    }
}

/// Stops at the first sequence of the target length.
struct FirstOfLength {
    len: usize,
    hit: Option<Vec<u32>>,
}

impl Collector for FirstOfLength {
    fn visit(&mut self, seq: &[u32]) -> Flow {
        if seq.len() == self.len {
            self.hit = Some(seq.to_vec());
            Flow::Stop
        } else {
            Flow::Continue
        }
    }
}

fn d0_params(group: &GroupSpec, c: u64) -> Result<(u64, usize)> {
    let (n, r) = group.homocyclic_params().ok_or_else(|| {
        Error::PreconditionViolation(format!("Property D0 needs a homocyclic group, got {group}"))
    })?;
    if n < 2 {
        return Err(Error::PreconditionViolation(
            "exponent must be at least 2".into(),
        ));
    }
    if c == 0 {
        return Err(Error::PreconditionViolation("c must be at least 1".into()));
    }
    Ok((n, r))
}

/// Decides Property D0 for `group = C_n^r` with respect to `c`.
///
/// Runs until the search finishes or `budget` runs out; in the latter case
/// the outcome is `Inconclusive` and `checkpoint` holds the state needed to
/// continue. Passing that checkpoint back resumes the search. Without a
/// budget the reported counterexample is the first one in shard order, so
/// results do not depend on scheduling.
pub fn verify_d0(
    group: &GroupSpec,
    c: u64,
    budget: &Budget,
    checkpoint: Option<SearchCheckpoint>,
) -> Result<D0Verdict> {
    verify_d0_with(group, c, budget, checkpoint, DEFAULT_SHARD_DEPTH)
}

/// As [`verify_d0`] with an explicit shard depth (ignored when resuming).
pub fn verify_d0_with(
    group: &GroupSpec,
    c: u64,
    budget: &Budget,
    checkpoint: Option<SearchCheckpoint>,
    shard_depth: usize,
) -> Result<D0Verdict> {
    let started = Instant::now();
    d0_params(group, c)?;
    let packed = PackedGroup::new(group)?;
    let depth = usize::try_from(c).unwrap_or(usize::MAX);
    let engine = Engine {
        group: &packed,
        reducer: Reducer::new(&packed, Symmetry::Linear),
        root: PoweredTerms::new(&packed),
        strict: true,
        max_depth: depth,
    };

    let shard_depth = match &checkpoint {
        Some(ck) => ck.shard_depth,
        None => shard_depth.min(depth - 1),
    };
    let mut quiet = FirstOfLength {
        len: usize::MAX,
        hit: None,
    };
    let prefix = engine.prefix(shard_depth, &mut quiet);

    let mut shards: Vec<ShardState> = match checkpoint {
        None => prefix.shards.into_iter().map(ShardState::pending).collect(),
        Some(ck) => {
            if ck.group != *group || ck.c != c {
                return Err(Error::CheckpointMismatch(format!(
                    "checkpoint is for {} with c = {}, not {group} with c = {c}",
                    ck.group, ck.c
                )));
            }
            let roots: Vec<&Vec<u32>> = ck.shards.iter().map(|s| &s.root).collect();
            if ck.prefix_stats != prefix.stats || roots != prefix.shards.iter().collect::<Vec<_>>()
            {
                return Err(Error::CheckpointMismatch(
                    "shard roots differ from this build's enumeration".into(),
                ));
            }
            ck.shards
        }
    };

    // resume every shard that is not finished
    let mut jobs = Vec::new();
    let mut job_index = Vec::new();
    for (i, shard) in shards.iter().enumerate() {
        let cursor = match &shard.status {
            ShardStatus::Done { .. } => continue,
            ShardStatus::Pending => engine.cursor_at(&shard.root),
            ShardStatus::InProgress { frontier, next } => {
                let (cursor, digests) = checkpoint::cursor_of(&shard.root, frontier, *next);
                let actual = engine.digests(&cursor.seq).ok_or_else(|| {
                    Error::CheckpointMismatch(format!("shard {i} frontier is not zero-sum free"))
                })?;
                if actual[shard.root.len()..] != digests[..] || !frontier_valid(&engine, &cursor) {
                    return Err(Error::CheckpointMismatch(format!(
                        "shard {i} frontier does not match its recorded DP digests"
                    )));
                }
                cursor
            }
        };
        jobs.push((cursor, shard.stats));
        job_index.push(i);
    }
    let meter = Meter::new(budget);
    let runs = engine.run_all(jobs, &meter, |_| FirstOfLength {
        len: depth,
        hit: None,
    });
    for (run, &i) in runs.into_iter().zip(&job_index) {
        let shard = &mut shards[i];
        shard.stats = run.stats;
        shard.status = match run.end {
            RunEnd::Exhausted => ShardStatus::Done {
                counterexample: None,
            },
            RunEnd::Stopped => ShardStatus::Done {
                counterexample: run.collector.hit,
            },
            RunEnd::Paused => {
                let digests = engine
                    .digests(&run.cursor.seq)
                    .expect("paused cursor is accepted");
                let (frontier, next) = checkpoint::frontier_of(&run.cursor, &digests);
                ShardStatus::InProgress { frontier, next }
            }
        };
    }

    let ckpt = SearchCheckpoint {
        version: CHECKPOINT_VERSION,
        group: group.clone(),
        c,
        shard_depth,
        prefix_stats: prefix.stats,
        shards,
    };
    let totals = ckpt.total_stats();
    let first_hit = ckpt.shards.iter().find_map(|s| match &s.status {
        ShardStatus::Done {
            counterexample: Some(t),
        } => Some(t.clone()),
        _ => None,
    });
    let (outcome, checkpoint) = if let Some(t) = first_hit {
        let t = GroupSequence::from_packed(&packed, &t);
        let g = group.zero();
        assert!(
            !is_d0_sequence_zero_sum(&g, &t),
            "reported counterexample has a zero-sum subsequence of length exp(G)"
        );
        (D0Outcome::Counterexample { g, t }, None)
    } else if ckpt.shards_done() == ckpt.shards.len() {
        (D0Outcome::Holds, None)
    } else {
        (D0Outcome::Inconclusive, Some(ckpt))
    };
    Ok(D0Verdict {
        group: group.clone(),
        c,
        outcome,
        nodes_explored: totals.nodes_explored,
        orbits_tested: totals.orbits_tested,
        elapsed: started.elapsed(),
        checkpoint,
    })
}

/// Frontier terms must strictly increase and each prefix must be canonical.
fn frontier_valid<C: Constraint>(engine: &Engine<'_, C>, cursor: &Cursor) -> bool {
    let order = engine.group.order();
    cursor.seq.windows(2).all(|w| w[0] < w[1])
        && cursor.next.iter().all(|&x| x <= order)
        && (cursor.base + 1..=cursor.seq.len())
            .all(|d| engine.reducer.is_canonical(&cursor.seq[..d]))
}

/// Does `g·T^{n−1}` have a zero-sum subsequence of length `n = exp(G)`?
pub fn is_d0_sequence_zero_sum(g: &GroupElement, t: &GroupSequence) -> bool {
    let n = t.group().exponent();
    let mut s = t.power(n - 1);
    s.push(g.clone()).expect("g lies in the group of T");
    has_zero_sum_fixed_length(&s, n)
}

/// Outcome of checking Property D against an `s` certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyDReport {
    pub holds: bool,
    /// `|T|` when every extremal sequence is `T^{n−1}`.
    pub c: Option<u64>,
    /// Extremal sequences not of the form `T^{n−1}`.
    pub violators: Vec<GroupSequence>,
}

/// Checks whether every extremal sequence in `cert` has the form `T^{n−1}`.
pub fn verify_d(group: &GroupSpec, cert: &ExtremalCertificate) -> Result<PropertyDReport> {
    if cert.invariant != Invariant::Egz || cert.group != *group {
        return Err(Error::InvalidArgument(format!(
            "expected an s certificate for {group}, got {} for {}",
            cert.invariant, cert.group
        )));
    }
    if !cert.exhaustive {
        return Err(Error::NonExhaustiveCertificate);
    }
    let n = group.exponent();
    let violators: Vec<GroupSequence> = cert
        .extremal_sequences
        .iter()
        .filter(|s| n > 1 && s.counts().any(|(_, k)| k % (n - 1) != 0))
        .cloned()
        .collect();
    let holds = violators.is_empty();
    let c = match (holds, n) {
        (false, _) => None,
        (true, 1) => Some(0),
        (true, _) => Some((cert.value - 1) / (n - 1)),
    };
    Ok(PropertyDReport {
        holds,
        c,
        violators,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::egz_constant;

    fn c(n: u64, r: usize) -> GroupSpec {
        GroupSpec::homocyclic(n, r).unwrap()
    }

    #[test]
    fn negative_control_on_c2() {
        let v = verify_d0(&c(2, 1), 1, &Budget::unlimited(), None).unwrap();
        let D0Outcome::Counterexample { g, t } = v.outcome else {
            panic!("expected a counterexample, got {:?}", v.outcome);
        };
        assert!(g.is_zero());
        assert_eq!(t.to_text(), "group: 2\n1 x (1)\n");
    }

    #[test]
    fn small_holds() {
        for (n, r, cc) in [(3, 1, 2), (2, 2, 4), (3, 2, 4), (5, 1, 4)] {
            let v = verify_d0(&c(n, r), cc, &Budget::unlimited(), None).unwrap();
            assert_eq!(v.outcome, D0Outcome::Holds, "C_{n}^{r}, c = {cc}");
            assert!(v.checkpoint.is_none());
        }
    }

    #[test]
    fn c_too_small_gives_counterexample() {
        let v = verify_d0(&c(3, 2), 3, &Budget::unlimited(), None).unwrap();
        assert!(matches!(v.outcome, D0Outcome::Counterexample { .. }));
    }

    #[test]
    fn preconditions() {
        assert!(verify_d0(&c(3, 2), 0, &Budget::unlimited(), None).is_err());
        let mixed = GroupSpec::new(&[2, 4]).unwrap();
        assert!(matches!(
            verify_d0(&mixed, 2, &Budget::unlimited(), None),
            Err(Error::PreconditionViolation(_))
        ));
    }

    #[test]
    fn budgeted_runs_resume_to_the_same_verdict() {
        let g = c(3, 3);
        let full = verify_d0(&g, 9, &Budget::unlimited(), None).unwrap();
        assert_eq!(full.outcome, D0Outcome::Holds);
        let mut ckpt = None;
        let mut rounds = 0;
        let resumed = loop {
            let v = verify_d0(&g, 9, &Budget::nodes(97), ckpt.take()).unwrap();
            rounds += 1;
            match v.outcome {
                D0Outcome::Inconclusive => {
                    let text = v.checkpoint.unwrap().to_json();
                    ckpt = Some(SearchCheckpoint::from_json(&text).unwrap());
                }
                _ => break v,
            }
        };
        assert!(rounds > 2);
        assert_eq!(resumed.outcome, full.outcome);
        assert_eq!(resumed.orbits_tested, full.orbits_tested);
        assert_eq!(resumed.nodes_explored, full.nodes_explored);
    }

    #[test]
    fn mismatched_checkpoint_is_rejected() {
        let v = verify_d0(&c(3, 3), 9, &Budget::nodes(50), None).unwrap();
        let ckpt = v.checkpoint.unwrap();
        assert!(matches!(
            verify_d0(&c(3, 3), 8, &Budget::unlimited(), Some(ckpt.clone())),
            Err(Error::CheckpointMismatch(_))
        ));
        let mut tampered = ckpt;
        for shard in &mut tampered.shards {
            if let ShardStatus::InProgress { frontier, .. } = &mut shard.status {
                if let Some(f) = frontier.first_mut() {
                    f.digest ^= 1;
                }
            }
        }
        if tampered.shards.iter().any(|s| matches!(&s.status, ShardStatus::InProgress { frontier, .. } if !frontier.is_empty())) {
            assert!(matches!(
                verify_d0(&c(3, 3), 9, &Budget::unlimited(), Some(tampered)),
                Err(Error::CheckpointMismatch(_))
            ));
        }
    }

    #[test]
    fn property_d_examples() {
        let b = Budget::unlimited();
        let r = verify_d(&c(3, 2), &egz_constant(&c(3, 2), &b).unwrap()).unwrap();
        assert!(r.holds);
        assert_eq!(r.c, Some(4));
        let r = verify_d(&c(2, 2), &egz_constant(&c(2, 2), &b).unwrap()).unwrap();
        assert_eq!((r.holds, r.c), (true, Some(4)));
        let r = verify_d(&c(5, 1), &egz_constant(&c(5, 1), &b).unwrap()).unwrap();
        assert_eq!((r.holds, r.c), (true, Some(2)));
    }

    #[test]
    fn property_d_needs_exhaustive_certificate() {
        let Err(Error::BudgetExceeded(cert)) = egz_constant(&c(3, 3), &Budget::nodes(10)) else {
            panic!("expected budget exhaustion");
        };
        assert!(matches!(
            verify_d(&c(3, 3), &cert),
            Err(Error::NonExhaustiveCertificate)
        ));
    }
}
