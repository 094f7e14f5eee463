//! Canonical forms of sequences under affine and linear automorphism groups.
//!
//! A sequence is stored as a sorted vector of packed indices; its canonical
//! form is the lexicographically least sorted image under the acting group.
//! Searches use [`Reducer::is_canonical`] for orderly generation: removing
//! the largest term of a canonical sequence leaves a canonical sequence, so
//! extending canonical prefixes by non-decreasing terms reaches every orbit
//! exactly once.
//!
//! Over a prime field the exact least image is found by fixing frames: an
//! origin among the most frequent terms and then, level by level, a support
//! vector outside the current span that becomes the next basis vector. The
//! basis vector chosen at level `i` is sent to `p^i`, so after level `i` the
//! images of everything in the span are exactly the terms below `p^i`. Frames
//! whose partial image is not minimal are dropped. For other groups the
//! automorphisms are enumerated explicitly when that is affordable, and
//! otherwise the unit scalars are used (a subgroup, which keeps searches
//! sound but reduces less).

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::group::{GroupSpec, PackedGroup};
use crate::sequence::GroupSequence;

/// Which maps act on sequences.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Symmetry {
    /// `x ↦ A·x + t`. Preserves zero-sums of length `exp(G)`.
    Affine,
    /// `x ↦ A·x`. Preserves all zero-sums.
    Linear,
}

/// Largest `n^(r²)` for which `GL(r, Z_n)` is enumerated matrix by matrix.
const MATRIX_ENUMERATION_LIMIT: u64 = 1 << 16;

#[derive(Clone, Debug)]
enum Action {
    Trivial,
    Frames { p: u32, rank: usize },
    Maps(Vec<Vec<u32>>),
}

#[derive(Clone, Debug)]
pub struct Reducer<'g> {
    group: &'g PackedGroup,
    symmetry: Symmetry,
    action: Action,
    exact: bool,
}

impl<'g> Reducer<'g> {
    /// Picks the strongest affordable reduction for `group`.
    pub fn new(group: &'g PackedGroup, symmetry: Symmetry) -> Self {
        let spec = group.spec();
        let (action, exact) = if spec.order() == 1 {
            (Action::Trivial, true)
        } else if let Some((n, r)) = spec.homocyclic_params() {
            if is_prime(n) {
                (
                    Action::Frames {
                        p: n as u32,
                        rank: r,
                    },
                    true,
                )
            } else if matrix_count_affordable(n, r) {
                (Action::Maps(general_linear_maps(group, n, r)), true)
            } else {
                (Action::Maps(unit_scalar_maps(group)), false)
            }
        } else {
            (Action::Maps(unit_scalar_maps(group)), false)
        };
        Self {
            group,
            symmetry,
            action,
            exact,
        }
    }

    /// Translations only (affine) or the identity (linear).
    pub fn translations_only(group: &'g PackedGroup, symmetry: Symmetry) -> Self {
        Self {
            group,
            symmetry,
            action: Action::Maps(vec![(0..group.order()).collect()]),
            exact: group.order() == 1,
        }
    }

    /// Whether the full automorphism group acts (so orbits are exact).
    pub fn is_exact(&self) -> bool {
        self.exact
    }

    pub fn symmetry(&self) -> Symmetry {
        self.symmetry
    }

    /// Least sorted image of `seq` (which must be sorted).
    pub fn canonical(&self, seq: &[u32]) -> Vec<u32> {
        match self.least_image(seq, None) {
            Scan::Least(v) => v,
            Scan::Beaten => unreachable!("no comparison sequence given"),
        }
    }

    /// Is the sorted `seq` its own least image?
    pub fn is_canonical(&self, seq: &[u32]) -> bool {
        matches!(self.least_image(seq, Some(seq)), Scan::Least(_))
    }

    fn least_image(&self, seq: &[u32], own: Option<&[u32]>) -> Scan {
        debug_assert!(
            seq.windows(2).all(|w| w[0] <= w[1]),
            "sequence must be sorted"
        );
        if seq.is_empty() {
            return Scan::Least(Vec::new());
        }
        let runs = runs(seq);
        match &self.action {
            Action::Trivial => Scan::Least(seq.to_vec()),
            Action::Maps(maps) => self.scan_maps(maps, &runs, seq.len(), own),
            Action::Frames { p, rank } => self.scan_frames(*p, *rank, &runs, seq.len(), own),
        }
    }

    fn origins(&self, runs: &[(u32, u32)]) -> Vec<u32> {
        match self.symmetry {
            Symmetry::Linear => vec![0],
            Symmetry::Affine => {
                let top = runs.iter().map(|r| r.1).max().unwrap_or(0);
                runs.iter().filter(|r| r.1 == top).map(|r| r.0).collect()
            }
        }
    }

    fn scan_maps(
        &self,
        maps: &[Vec<u32>],
        runs: &[(u32, u32)],
        len: usize,
        own: Option<&[u32]>,
    ) -> Scan {
        let mut best: Option<Vec<u32>> = None;
        let mut image = Vec::with_capacity(len);
        for origin in self.origins(runs) {
            for map in maps {
                image.clear();
                for &(x, m) in runs {
                    let y = map[self.group.sub(x, origin) as usize];
                    image.extend(std::iter::repeat_n(y, m as usize));
                }
                image.sort_unstable();
                if let Some(own) = own {
                    if image.as_slice() < own {
                        return Scan::Beaten;
                    }
                }
                if best.as_ref().is_none_or(|b| image < *b) {
                    best = Some(image.clone());
                }
            }
        }
        Scan::Least(best.expect("at least one map and origin"))
    }

    fn scan_frames(
        &self,
        p: u32,
        rank: usize,
        runs: &[(u32, u32)],
        len: usize,
        own: Option<&[u32]>,
    ) -> Scan {
        let order = self.group.order() as usize;
        let mut frames: Vec<Frame> = Vec::new();
        for origin in self.origins(runs) {
            let support: Vec<(u32, u32)> = runs
                .iter()
                .map(|&(x, m)| (self.group.sub(x, origin), m))
                .collect();
            let mut image = vec![UNSPANNED; order];
            image[0] = 0;
            let zero_mult = support.iter().find(|s| s.0 == 0).map_or(0, |s| s.1);
            frames.push(Frame {
                support,
                image,
                members: vec![0],
                partial: vec![0; zero_mult as usize],
            });
        }
        // every origin has the same multiplicity, so level 0 is a tie
        let mut best = frames[0].partial.clone();
        if let Some(own) = own {
            if cmp_padded(&best, below(own, 1)) == Ordering::Less {
                return Scan::Beaten;
            }
        }

        let mut scale = 1u32;
        for _level in 0..rank {
            let mut next: Vec<Frame> = Vec::new();
            let mut level_best: Option<Vec<u32>> = None;
            for frame in frames {
                if frame.partial.len() == len {
                    // everything already spanned; further basis choices change nothing
                    consider(&mut level_best, &mut next, frame);
                    continue;
                }
                for &(b, _) in &frame.support {
                    if frame.image[b as usize] != UNSPANNED {
                        continue;
                    }
                    let extended = frame.extend(self.group, b, p, scale);
                    consider(&mut level_best, &mut next, extended);
                }
            }
            best = level_best.expect("some frame survives each level");
            frames = next;
            scale *= p;
            if let Some(own) = own {
                let own_part = if best.len() == len {
                    own
                } else {
                    below(own, scale)
                };
                if cmp_padded(&best, own_part) == Ordering::Less {
                    return Scan::Beaten;
                }
            }
        }
        debug_assert_eq!(best.len(), len);
        Scan::Least(best)
    }
}

enum Scan {
    Least(Vec<u32>),
    Beaten,
}

const UNSPANNED: u32 = u32::MAX;

#[derive(Clone)]
struct Frame {
    /// Support runs translated by the origin.
    support: Vec<(u32, u32)>,
    /// Image of each spanned vector, `UNSPANNED` elsewhere.
    image: Vec<u32>,
    members: Vec<u32>,
    /// Sorted images of the spanned part of the sequence.
    partial: Vec<u32>,
}

impl Frame {
    fn extend(&self, group: &PackedGroup, b: u32, p: u32, scale: u32) -> Frame {
        let mut image = self.image.clone();
        let mut members = Vec::with_capacity(self.members.len() * p as usize);
        members.extend_from_slice(&self.members);
        let mut kb = 0u32;
        for k in 1..p {
            kb = group.add(kb, b);
            for &v in &self.members {
                let w = group.add(v, kb);
                image[w as usize] = self.image[v as usize] + k * scale;
                members.push(w);
            }
        }
        let mut partial: Vec<u32> = Vec::with_capacity(self.partial.len());
        for &(x, m) in &self.support {
            let y = image[x as usize];
            if y != UNSPANNED {
                partial.extend(std::iter::repeat_n(y, m as usize));
            }
        }
        partial.sort_unstable();
        Frame {
            support: self.support.clone(),
            image,
            members,
            partial,
        }
    }
}

fn consider(best: &mut Option<Vec<u32>>, keep: &mut Vec<Frame>, frame: Frame) {
    let ord = best
        .as_ref()
        .map_or(Ordering::Less, |b| cmp_padded(&frame.partial, b));
    match ord {
        Ordering::Less => {
            *best = Some(frame.partial.clone());
            keep.clear();
            keep.push(frame);
        }
        Ordering::Equal => keep.push(frame),
        Ordering::Greater => {}
    }
}

/// Lexicographic order where a shorter sequence continues with `+∞`.
fn cmp_padded(a: &[u32], b: &[u32]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.cmp(y) {
            Ordering::Equal => {}
            o => return o,
        }
    }
    b.len().cmp(&a.len())
}

/// The prefix of a sorted sequence consisting of terms below `bound`.
fn below(seq: &[u32], bound: u32) -> &[u32] {
    &seq[..seq.partition_point(|&x| x < bound)]
}

fn runs(seq: &[u32]) -> Vec<(u32, u32)> {
    let mut out: Vec<(u32, u32)> = Vec::new();
    for &x in seq {
        match out.last_mut() {
            Some((y, m)) if *y == x => *m += 1,
            _ => out.push((x, 1)),
        }
    }
    out
}

pub(crate) fn is_prime(n: u64) -> bool {
    n >= 2
        && (2..)
            .take_while(|d| d * d <= n)
            .all(|d| !n.is_multiple_of(d))
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn matrix_count_affordable(n: u64, r: usize) -> bool {
    let mut total: u64 = 1;
    for _ in 0..r * r {
        total = total.saturating_mul(n);
    }
    total <= MATRIX_ENUMERATION_LIMIT
}

/// All `x ↦ u·x` with `u` a unit modulo the exponent.
fn unit_scalar_maps(group: &PackedGroup) -> Vec<Vec<u32>> {
    let n = group.spec().exponent();
    (1..n.max(2))
        .filter(|&u| gcd(u, n) == 1)
        .map(|u| (0..group.order()).map(|x| group.scale(u, x)).collect())
        .collect()
}

/// Every invertible `r×r` matrix over `Z_n`, as a permutation of packed indices.
fn general_linear_maps(group: &PackedGroup, n: u64, r: usize) -> Vec<Vec<u32>> {
    let basis: Vec<u32> = (0..r)
        .map(|k| {
            let mut d = vec![0u32; r];
            d[k] = 1;
            group.encode(&d)
        })
        .collect();
    let mut maps = Vec::new();
    let entries = r * r;
    let mut m = vec![0u64; entries];
    loop {
        if is_unit(det_mod(&m, r, n), n) {
            // column k is the image of basis vector k
            let cols: Vec<u32> = (0..r)
                .map(|k| group.encode(&(0..r).map(|i| m[i * r + k] as u32).collect::<Vec<_>>()))
                .collect();
            let mut map = vec![0u32; group.order() as usize];
            for x in 0..group.order() {
                let mut y = 0;
                for (k, &d) in group.digits(x).iter().enumerate() {
                    y = group.add(y, group.scale(d as u64, cols[k]));
                }
                map[x as usize] = y;
            }
            debug_assert!(basis.iter().zip(&cols).all(|(&b, &c)| map[b as usize] == c));
            maps.push(map);
        }
        // odometer over matrix entries
        let mut i = 0;
        loop {
            if i == entries {
                return maps;
            }
            m[i] += 1;
            if m[i] < n {
                break;
            }
            m[i] = 0;
            i += 1;
        }
    }
}

fn is_unit(d: u64, n: u64) -> bool {
    gcd(d, n) == 1
}

/// Determinant modulo `n` by cofactor expansion (r is tiny here).
fn det_mod(m: &[u64], r: usize, n: u64) -> u64 {
    fn rec(m: &[u64], r: usize, rows: &[usize], cols: &mut Vec<usize>, n: u64) -> u64 {
        let Some((&row, rest)) = rows.split_first() else {
            return 1 % n;
        };
        let mut acc = 0u64;
        for idx in 0..cols.len() {
            let c = cols.remove(idx);
            let minor = rec(m, r, rest, cols, n);
            cols.insert(idx, c);
            let term = m[row * r + c] % n * minor % n;
            acc = if idx % 2 == 0 {
                (acc + term) % n
            } else {
                (acc + n - term) % n
            };
        }
        acc
    }
    let rows: Vec<usize> = (0..r).collect();
    let mut cols: Vec<usize> = (0..r).collect();
    rec(m, r, &rows, &mut cols, n)
}

/// Lexicographically least sequence affinely equivalent to `seq`.
///
/// Only homocyclic groups are supported, and for composite exponents only
/// when the automorphism group is small enough to enumerate.
pub fn canonical_form(group: &GroupSpec, seq: &GroupSequence) -> Result<GroupSequence> {
    if seq.group() != group {
        return Err(Error::InvalidArgument(format!(
            "sequence is over {}, not {group}",
            seq.group()
        )));
    }
    if !group.is_homocyclic() && !group.is_trivial() {
        return Err(Error::Unsupported(format!(
            "canonical forms need a homocyclic group, got {group}"
        )));
    }
    let packed = PackedGroup::new(group)?;
    let reducer = Reducer::new(&packed, Symmetry::Affine);
    if !reducer.is_exact() {
        return Err(Error::Unsupported(format!(
            "automorphism group of {group} is too large to enumerate"
        )));
    }
    let image = reducer.canonical(&seq.to_packed(&packed));
    Ok(GroupSequence::from_packed(&packed, &image))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn packed(n: u64, r: usize) -> PackedGroup {
        PackedGroup::new(&GroupSpec::homocyclic(n, r).unwrap()).unwrap()
    }

    #[test]
    fn gl_sizes() {
        // |GL(2, Z_4)| = 96, |GL(2, Z_6)| = 6 * 48
        assert_eq!(general_linear_maps(&packed(4, 2), 4, 2).len(), 96);
        assert_eq!(general_linear_maps(&packed(6, 2), 6, 2).len(), 288);
        assert_eq!(general_linear_maps(&packed(4, 1), 4, 1).len(), 2);
    }

    #[test]
    fn padded_order() {
        assert_eq!(cmp_padded(&[0, 1], &[0, 1, 5]), Ordering::Greater);
        assert_eq!(cmp_padded(&[0, 1, 5], &[0, 2]), Ordering::Less);
        assert_eq!(cmp_padded(&[], &[]), Ordering::Equal);
    }

    #[test]
    fn small_orbit_examples() {
        let g = GroupSpec::homocyclic(3, 2).unwrap();
        let a = GroupSequence::from_coords(&g, &[&[1, 1], &[1, 1], &[2, 2]]).unwrap();
        let b = GroupSequence::from_coords(&g, &[&[0, 0], &[0, 0], &[2, 2]]).unwrap();
        assert_eq!(
            canonical_form(&g, &a).unwrap(),
            canonical_form(&g, &b).unwrap()
        );

        let c3 = GroupSpec::cyclic(3).unwrap();
        let z = GroupSequence::from_coords(&c3, &[&[0], &[0], &[0]]).unwrap();
        assert_eq!(canonical_form(&c3, &z).unwrap(), z);

        let v = GroupSpec::homocyclic(2, 2).unwrap();
        let forms: Vec<_> = v
            .elements()
            .map(|e| canonical_form(&v, &GroupSequence::from_elements(&v, [&e]).unwrap()).unwrap())
            .collect();
        assert!(forms.windows(2).all(|w| w[0] == w[1]));
    }

    #[test]
    fn non_homocyclic_is_unsupported() {
        let g = GroupSpec::new(&[2, 4]).unwrap();
        let s = GroupSequence::empty(&g);
        assert!(matches!(canonical_form(&g, &s), Err(Error::Unsupported(_))));
    }

    #[test]
    fn canonical_flag_matches_canonical_form() {
        let g = packed(3, 2);
        let red = Reducer::new(&g, Symmetry::Affine);
        let s = vec![0, 0, 1, 3];
        assert!(red.is_canonical(&s));
        assert_eq!(red.canonical(&s), s);
        let t = vec![1, 1, 5, 8];
        assert!(!red.is_canonical(&t));
        assert!(red.is_canonical(&red.canonical(&t)));
    }

    #[test]
    fn linear_mode_fixes_zero() {
        let g = packed(5, 1);
        let red = Reducer::new(&g, Symmetry::Linear);
        assert_eq!(red.canonical(&[3, 3]), vec![1, 1]);
        assert_eq!(red.canonical(&[2, 4]), vec![1, 2]);
        assert_eq!(red.canonical(&[0, 4]), vec![0, 1]);
    }
}
