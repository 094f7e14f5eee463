//! Caps in `F_3^r`: sets with no three distinct points summing to zero,
//! equivalently no three collinear points.
//!
//! A cap of size `k` is a squarefree sequence over `C_3^r` without a
//! zero-sum subsequence of length 3, so the largest cap has size `g(C_3^r) − 1`.

use serde::{Deserialize, Serialize};

use crate::canon::{Reducer, Symmetry};
use crate::cap_data::{CAP_112, CAP_45};
use crate::engine::{Budget, Constraint, Engine};
use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupSpec, PackedGroup};
use crate::search::{extremal, ExtremalCertificate, Invariant};
use crate::sequence::GroupSequence;

/// Largest rank searched exhaustively; above it stored caps are checked.
pub const MAX_SEARCH_RANK: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CapSource {
    /// Exhaustive search over all caps up to affine maps.
    Search,
    /// A stored cap, re-checked; maximality rests on the known value of `s(C_3^r)`.
    StoredCap,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CapReport {
    pub rank: usize,
    pub size: u64,
    /// Representative maximum caps, one per affine class when searched.
    pub caps: Vec<Vec<GroupElement>>,
    pub exhaustive: bool,
    pub source: CapSource,
}

/// Is `points` a cap in `F_3^r` (distinct points, no three on a line)?
pub fn is_cap(group: &GroupSpec, points: &[GroupElement]) -> bool {
    if group.homocyclic_params().is_none_or(|(n, _)| n != 3) && !group.is_trivial() {
        return false;
    }
    let mut seen = std::collections::BTreeSet::new();
    if !points
        .iter()
        .all(|p| group.contains(p) && seen.insert(p.clone()))
    {
        return false;
    }
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            let third = group.neg(&group.add(a, b).expect("valid")).expect("valid");
            if &third != a && &third != b && seen.contains(&third) {
                return false;
            }
        }
    }
    true
}

/// Incremental cap test: `blocked[x]` counts pairs whose third collinear point is `x`.
#[derive(Clone)]
struct CapState<'g> {
    group: &'g PackedGroup,
    points: Vec<u32>,
    blocked: Vec<u32>,
}

impl<'g> CapState<'g> {
    fn new(group: &'g PackedGroup) -> Self {
        Self {
            group,
            points: Vec::new(),
            blocked: vec![0; group.order() as usize],
        }
    }
}

impl Constraint for CapState<'_> {
    fn try_push(&mut self, x: u32) -> bool {
        if self.blocked[x as usize] > 0 {
            return false;
        }
        for &y in &self.points {
            let z = self.group.neg(self.group.add(x, y));
            self.blocked[z as usize] += 1;
        }
        self.points.push(x);
        true
    }

    fn pop(&mut self) {
        let x = self.points.pop().expect("pop without push");
        for &y in &self.points {
            let z = self.group.neg(self.group.add(x, y));
            self.blocked[z as usize] -= 1;
        }
    }

    fn digest(&self) -> u64 {
        self.points.iter().fold(0xcbf2_9ce4_8422_2325u64, |h, &x| {
            (h ^ x as u64).wrapping_mul(0x0000_0100_0000_01b3)
        })
    }
}

fn stored(rank: usize) -> Option<Vec<Vec<u64>>> {
    fn widen<const R: usize>(rows: &[[u8; R]]) -> Vec<Vec<u64>> {
        rows.iter()
            .map(|row| row.iter().map(|&c| c as u64).collect())
            .collect()
    }
    match rank {
        5 => Some(widen(&CAP_45)),
        6 => Some(widen(&CAP_112)),
        _ => None,
    }
}

/// Largest cap in `F_3^r`.
///
/// Ranks up to [`MAX_SEARCH_RANK`] are searched exhaustively. Ranks 5 and 6
/// run in verification mode: a stored cap of the known maximum size is
/// checked and returned with `exhaustive = false`. Larger ranks are searched
/// within `budget`.
pub fn max_cap(rank: usize, budget: &Budget) -> Result<CapReport> {
    if rank == 0 {
        return Err(Error::InvalidArgument("rank must be at least 1".into()));
    }
    let group = GroupSpec::homocyclic(3, rank)?;
    if rank > MAX_SEARCH_RANK {
        if let Some(rows) = stored(rank) {
            let cap = rows
                .iter()
                .map(|c| group.element(c))
                .collect::<Result<Vec<_>>>()?;
            assert!(
                is_cap(&group, &cap),
                "stored cap for rank {rank} is not a cap"
            );
            return Ok(CapReport {
                rank,
                size: cap.len() as u64,
                caps: vec![cap],
                exhaustive: false,
                source: CapSource::StoredCap,
            });
        }
    }
    let cert = cap_search(&group, budget)?;
    Ok(CapReport {
        rank,
        size: cert.value - 1,
        caps: cert
            .extremal_sequences
            .iter()
            .map(|s| s.support().cloned().collect())
            .collect(),
        exhaustive: true,
        source: CapSource::Search,
    })
}

/// Exhaustive cap search, reported as a certificate for `g(C_3^r)`.
fn cap_search(group: &GroupSpec, budget: &Budget) -> Result<ExtremalCertificate> {
    let packed = PackedGroup::new(group)?;
    let engine = Engine {
        group: &packed,
        reducer: Reducer::new(&packed, Symmetry::Affine),
        root: CapState::new(&packed),
        strict: true,
        max_depth: usize::MAX,
    };
    extremal(Invariant::Squarefree, engine, budget)
}

/// The stored cap for ranks 5 and 6 as a squarefree sequence.
pub fn stored_cap(rank: usize) -> Option<GroupSequence> {
    let group = GroupSpec::homocyclic(3, rank).ok()?;
    let rows = stored(rank)?;
    let elems: Vec<GroupElement> = rows
        .iter()
        .map(|c| group.element(c).ok())
        .collect::<Option<_>>()?;
    GroupSequence::from_elements(&group, &elems).ok()
}
