//! Serialized state of an interrupted Property D0 search.

use std::io;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::engine::{Cursor, SearchStats};
use crate::error::{Error, Result};
use crate::group::GroupSpec;

/// Bumped whenever the layout or the search order changes.
pub const CHECKPOINT_VERSION: u32 = 1;

/// Everything needed to continue a D0 search where it stopped.
///
/// Elements are stored as packed indices: mixed radix over the invariant
/// factors with the first coordinate most significant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchCheckpoint {
    pub version: u32,
    pub group: GroupSpec,
    pub c: u64,
    pub shard_depth: usize,
    /// Counts from enumerating the shard roots.
    pub prefix_stats: SearchStats,
    pub shards: Vec<ShardState>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShardState {
    /// Root of the shard's subtree.
    pub root: Vec<u32>,
    pub stats: SearchStats,
    pub status: ShardStatus,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "state", rename_all = "snake_case")]
pub enum ShardStatus {
    Pending,
    InProgress {
        frontier: Vec<FrontierFrame>,
        next: u32,
    },
    Done {
        counterexample: Option<Vec<u32>>,
    },
}

/// One level of the DFS stack below the shard root.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrontierFrame {
    /// Term chosen at this depth.
    pub term: u32,
    /// Next candidate to try at this depth once the subtree below is done.
    pub next: u32,
    /// Digest of the zero-sum DP state after pushing `term`.
    pub digest: u64,
}

impl ShardState {
    pub(crate) fn pending(root: Vec<u32>) -> Self {
        Self {
            root,
            stats: SearchStats::default(),
            status: ShardStatus::Pending,
        }
    }

    pub fn is_done(&self) -> bool {
        matches!(self.status, ShardStatus::Done { .. })
    }
}

/// Packs a cursor below `root` into frames; `digests[i]` belongs to `cursor.seq[i]`.
pub(crate) fn frontier_of(cursor: &Cursor, digests: &[u64]) -> (Vec<FrontierFrame>, u32) {
    let frames = (cursor.base..cursor.seq.len())
        .map(|d| FrontierFrame {
            term: cursor.seq[d],
            next: cursor.next[d - cursor.base],
            digest: digests[d],
        })
        .collect();
    let next = *cursor
        .next
        .last()
        .expect("cursor has a slot for its own depth");
    (frames, next)
}

/// Inverse of [`frontier_of`]; digests are returned for validation.
pub(crate) fn cursor_of(root: &[u32], frames: &[FrontierFrame], next: u32) -> (Cursor, Vec<u64>) {
    let mut seq = root.to_vec();
    let mut slots = Vec::with_capacity(frames.len() + 1);
    let mut digests = Vec::with_capacity(frames.len());
    for f in frames {
        seq.push(f.term);
        slots.push(f.next);
        digests.push(f.digest);
    }
    slots.push(next);
    (
        Cursor {
            base: root.len(),
            seq,
            next: slots,
        },
        digests,
    )
}

impl SearchCheckpoint {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("checkpoint serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let ckpt: Self = serde_json::from_str(text)
            .map_err(|e| Error::CheckpointMismatch(format!("unreadable checkpoint: {e}")))?;
        if ckpt.version != CHECKPOINT_VERSION {
            return Err(Error::CheckpointMismatch(format!(
                "checkpoint format version {} (expected {CHECKPOINT_VERSION})",
                ckpt.version
            )));
        }
        Ok(ckpt)
    }

    /// Writes atomically: a crash mid-write leaves the previous file intact.
    pub fn save(&self, path: &Path) -> io::Result<()> {
        let tmp = path.with_extension("tmp");
        std::fs::write(&tmp, self.to_json())?;
        std::fs::rename(&tmp, path)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::CheckpointMismatch(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn total_stats(&self) -> SearchStats {
        let mut total = self.prefix_stats;
        for s in &self.shards {
            total += s.stats;
        }
        total
    }

    pub fn shards_done(&self) -> usize {
        self.shards.iter().filter(|s| s.is_done()).count()
    }
}
