//! Resumable orderly-generation depth-first search.
//!
//! The engine enumerates sorted sequences of packed indices, one canonical
//! representative per orbit, extending a prefix only while a monotone
//! constraint still accepts it. The whole position of a search lives in a
//! [`Cursor`] (the current sequence and the next candidate at each depth),
//! so a run can stop at any node boundary and pick up later from the same
//! place. Work is split into shards: the canonical nodes at a fixed depth,
//! each explored independently.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::canon::Reducer;
use crate::group::PackedGroup;

/// Incremental, monotone acceptance test for sequences.
///
/// `try_push` returns `false` (leaving the state unchanged) when the extended
/// sequence is rejected; any extension of a rejected sequence is rejected too.
pub(crate) trait Constraint: Clone + Send {
    fn try_push(&mut self, x: u32) -> bool;
    fn pop(&mut self);
    fn digest(&self) -> u64;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Flow {
    Continue,
    Stop,
}

/// Receives every accepted canonical sequence.
pub(crate) trait Collector: Send {
    fn visit(&mut self, seq: &[u32]) -> Flow;
}

/// Node and orbit counts of a (partial) run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    /// Candidates tried.
    pub nodes_explored: u64,
    /// Canonical sequences accepted by the constraint.
    pub orbits_tested: u64,
}

impl std::ops::AddAssign for SearchStats {
    fn add_assign(&mut self, rhs: Self) {
        self.nodes_explored += rhs.nodes_explored;
        self.orbits_tested += rhs.orbits_tested;
    }
}

/// Resource limits for a search. All limits are optional.
#[derive(Clone, Debug, Default)]
pub struct Budget {
    pub max_nodes: Option<u64>,
    pub max_duration: Option<Duration>,
    pub cancel: Option<Arc<AtomicBool>>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Self::default()
    }

    pub fn nodes(max_nodes: u64) -> Self {
        Self {
            max_nodes: Some(max_nodes),
            ..Self::default()
        }
    }

    pub fn with_duration(mut self, d: Duration) -> Self {
        self.max_duration = Some(d);
        self
    }

    pub fn with_cancel(mut self, flag: Arc<AtomicBool>) -> Self {
        self.cancel = Some(flag);
        self
    }
}

const CLOCK_CHECK_INTERVAL: u32 = 1024;

/// Shared budget accounting for all workers of one run.
pub(crate) struct Meter {
    remaining: Option<AtomicU64>,
    deadline: Option<Instant>,
    cancel: Option<Arc<AtomicBool>>,
    tripped: AtomicBool,
}

impl Meter {
    pub fn new(budget: &Budget) -> Self {
        Self {
            remaining: budget.max_nodes.map(AtomicU64::new),
            deadline: budget.max_duration.map(|d| Instant::now() + d),
            cancel: budget.cancel.clone(),
            tripped: AtomicBool::new(false),
        }
    }

    pub fn unlimited() -> Self {
        Self::new(&Budget::unlimited())
    }

    fn consume(&self, ticks: &mut u32) -> bool {
        if self.tripped.load(Ordering::Relaxed) {
            return false;
        }
        if let Some(rem) = &self.remaining {
            if rem
                .fetch_update(Ordering::Relaxed, Ordering::Relaxed, |r| r.checked_sub(1))
                .is_err()
            {
                self.tripped.store(true, Ordering::Relaxed);
                return false;
            }
        }
        *ticks += 1;
        if *ticks >= CLOCK_CHECK_INTERVAL {
            *ticks = 0;
            let late = self.deadline.is_some_and(|d| Instant::now() >= d);
            let cancelled = self
                .cancel
                .as_ref()
                .is_some_and(|c| c.load(Ordering::Relaxed));
            if late || cancelled {
                self.tripped.store(true, Ordering::Relaxed);
                return false;
            }
        }
        true
    }
}

/// Position of a search below a fixed base prefix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cursor {
    /// Depth of the subtree root; terms below it are never changed.
    pub base: usize,
    pub seq: Vec<u32>,
    /// `next[i]` is the next candidate to try at depth `base + i`.
    pub next: Vec<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum RunEnd {
    Exhausted,
    Stopped,
    Paused,
}

pub(crate) struct Engine<'g, C> {
    pub group: &'g PackedGroup,
    pub reducer: Reducer<'g>,
    pub root: C,
    /// Sets instead of multisets: candidates strictly increase.
    pub strict: bool,
    pub max_depth: usize,
}

/// Result of enumerating everything down to the shard depth.
pub(crate) struct Prefix {
    pub shards: Vec<Vec<u32>>,
    pub stats: SearchStats,
}

impl<'g, C: Constraint> Engine<'g, C> {
    fn child_start(&self, depth: usize, last: u32, limit: usize) -> u32 {
        if depth >= limit.min(self.max_depth) {
            self.group.order()
        } else if self.strict {
            last + 1
        } else {
            last
        }
    }

    /// A cursor over the subtree below `prefix` (which must be accepted and canonical).
    pub fn cursor_at(&self, prefix: &[u32]) -> Cursor {
        let start = match prefix.last() {
            None => 0,
            Some(&last) => self.child_start(prefix.len(), last, usize::MAX),
        };
        Cursor {
            base: prefix.len(),
            seq: prefix.to_vec(),
            next: vec![start],
        }
    }

    /// Rebuilds the constraint state for `seq`; `None` if some push is refused.
    pub fn replay(&self, seq: &[u32]) -> Option<C> {
        let mut state = self.root.clone();
        for &x in seq {
            if !state.try_push(x) {
                return None;
            }
        }
        Some(state)
    }

    /// Digest of the constraint state after each prefix of `seq`.
    pub fn digests(&self, seq: &[u32]) -> Option<Vec<u64>> {
        let mut state = self.root.clone();
        let mut out = Vec::with_capacity(seq.len());
        for &x in seq {
            if !state.try_push(x) {
                return None;
            }
            out.push(state.digest());
        }
        Some(out)
    }

    /// Advances `cursor` until the subtree is exhausted, the collector stops,
    /// or the meter runs out. `state` must match `cursor.seq`.
    pub fn run<K: Collector + ?Sized>(
        &self,
        cursor: &mut Cursor,
        state: &mut C,
        stats: &mut SearchStats,
        meter: &Meter,
        collector: &mut K,
        depth_limit: usize,
    ) -> RunEnd {
        let order = self.group.order();
        let mut ticks = 0u32;
        loop {
            let depth = cursor.seq.len();
            let slot = depth - cursor.base;
            let cand = cursor.next[slot];
            if cand >= order {
                if slot == 0 {
                    return RunEnd::Exhausted;
                }
                cursor.next.pop();
                cursor.seq.pop();
                state.pop();
                continue;
            }
            if !meter.consume(&mut ticks) {
                return RunEnd::Paused;
            }
            cursor.next[slot] = cand + 1;
            stats.nodes_explored += 1;
            if !state.try_push(cand) {
                continue;
            }
            cursor.seq.push(cand);
            if !self.reducer.is_canonical(&cursor.seq) {
                cursor.seq.pop();
                state.pop();
                continue;
            }
            stats.orbits_tested += 1;
            let flow = collector.visit(&cursor.seq);
            cursor
                .next
                .push(self.child_start(depth + 1, cand, depth_limit));
            if flow == Flow::Stop {
                return RunEnd::Stopped;
            }
        }
    }

    /// Enumerates all canonical sequences of length at most `shard_depth`,
    /// returning the extendable ones of that exact length as shards.
    pub fn prefix<K: Collector + ?Sized>(&self, shard_depth: usize, collector: &mut K) -> Prefix {
        if shard_depth == 0 {
            return Prefix {
                shards: vec![Vec::new()],
                stats: SearchStats::default(),
            };
        }
        struct Tap<'a, K: ?Sized> {
            inner: &'a mut K,
            depth: usize,
            shards: Vec<Vec<u32>>,
        }
        impl<K: Collector + ?Sized> Collector for Tap<'_, K> {
            fn visit(&mut self, seq: &[u32]) -> Flow {
                if seq.len() == self.depth {
                    self.shards.push(seq.to_vec());
                }
                self.inner.visit(seq)
            }
        }
        let limit = shard_depth.min(self.max_depth);
        let mut tap = Tap {
            inner: collector,
            depth: if shard_depth < self.max_depth {
                shard_depth
            } else {
                usize::MAX
            },
            shards: Vec::new(),
        };
        let mut cursor = Cursor {
            base: 0,
            seq: Vec::new(),
            next: vec![if limit == 0 { self.group.order() } else { 0 }],
        };
        let mut state = self.root.clone();
        let mut stats = SearchStats::default();
        self.run(
            &mut cursor,
            &mut state,
            &mut stats,
            &Meter::unlimited(),
            &mut tap,
            limit,
        );
        Prefix {
            shards: tap.shards,
            stats,
        }
    }

    /// Runs the given cursors in parallel, each with its own collector.
    ///
    /// Results come back in input order, so merging them is independent of
    /// scheduling.
    pub fn run_all<K, F>(
        &self,
        cursors: Vec<(Cursor, SearchStats)>,
        meter: &Meter,
        make: F,
    ) -> Vec<ShardRun<K>>
    where
        K: Collector,
        F: Fn(usize) -> K + Sync,
        C: Sync,
    {
        cursors
            .into_par_iter()
            .enumerate()
            .map(|(i, (mut cursor, mut stats))| {
                let mut collector = make(i);
                let mut state = self
                    .replay(&cursor.seq)
                    .expect("cursor sequence is accepted by its constraint");
                let end = self.run(
                    &mut cursor,
                    &mut state,
                    &mut stats,
                    meter,
                    &mut collector,
                    usize::MAX,
                );
                ShardRun {
                    end,
                    cursor,
                    stats,
                    collector,
                }
            })
            .collect()
    }
}

pub(crate) struct ShardRun<K> {
    pub end: RunEnd,
    pub cursor: Cursor,
    pub stats: SearchStats,
    pub collector: K,
}
