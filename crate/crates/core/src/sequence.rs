//! Sequences over a group: finite multisets with cached length and sum.
//!
//! Also hosts the line-oriented text format used by the CLI:
//!
//! ```text
//! # comment
//! group: 3,3
//! 2 x (0,1)
//! 1 x (1,1)
//! ```

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupSpec, Homomorphism, PackedGroup};

/// A finite multiset of elements of `group`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupSequence {
    group: GroupSpec,
    counts: BTreeMap<GroupElement, u64>,
    len: u64,
    sum: GroupElement,
}

impl GroupSequence {
    pub fn empty(group: &GroupSpec) -> Self {
        Self {
            group: group.clone(),
            counts: BTreeMap::new(),
            len: 0,
            sum: group.zero(),
        }
    }

    pub fn from_elements<'a>(
        group: &GroupSpec,
        elements: impl IntoIterator<Item = &'a GroupElement>,
    ) -> Result<Self> {
        let mut s = Self::empty(group);
        for e in elements {
            s.push(e.clone())?;
        }
        Ok(s)
    }

    /// Builds from `(element, multiplicity)` pairs; zero multiplicities are skipped.
    pub fn from_counts(
        group: &GroupSpec,
        counts: impl IntoIterator<Item = (GroupElement, u64)>,
    ) -> Result<Self> {
        let mut s = Self::empty(group);
        for (e, k) in counts {
            s.push_n(e, k)?;
        }
        Ok(s)
    }

    /// Convenience constructor from coordinate lists.
    pub fn from_coords(group: &GroupSpec, coords: &[&[u64]]) -> Result<Self> {
        let elems = coords
            .iter()
            .map(|c| group.element(c))
            .collect::<Result<Vec<_>>>()?;
        Self::from_elements(group, &elems)
    }

    pub(crate) fn from_packed(packed: &PackedGroup, xs: &[u32]) -> Self {
        let mut s = Self::empty(packed.spec());
        for &x in xs {
            s.push(packed.element(x)).expect("packed index is valid");
        }
        s
    }

    pub(crate) fn to_packed(&self, packed: &PackedGroup) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.len as usize);
        for (e, &k) in &self.counts {
            let x = packed.index(e);
            out.extend(std::iter::repeat_n(x, k as usize));
        }
        out.sort_unstable();
        out
    }

    pub fn push(&mut self, e: GroupElement) -> Result<()> {
        self.push_n(e, 1)
    }

    pub fn push_n(&mut self, e: GroupElement, k: u64) -> Result<()> {
        self.group.check(&e)?;
        if k == 0 {
            return Ok(());
        }
        let contribution = self.group.scale((k % self.group.exponent()) as i64, &e)?;
        self.sum = self.group.add(&self.sum, &contribution)?;
        self.len += k;
        *self.counts.entry(e).or_insert(0) += k;
        Ok(())
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    /// `|S|`.
    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// `σ(S)`.
    pub fn sum(&self) -> &GroupElement {
        &self.sum
    }

    pub fn is_zero_sum(&self) -> bool {
        self.sum.is_zero()
    }

    /// `v_g(S)`.
    pub fn multiplicity(&self, g: &GroupElement) -> u64 {
        self.counts.get(g).copied().unwrap_or(0)
    }

    pub fn support(&self) -> impl Iterator<Item = &GroupElement> {
        self.counts.keys()
    }

    /// Distinct elements with their multiplicities, in element order.
    pub fn counts(&self) -> impl Iterator<Item = (&GroupElement, u64)> {
        self.counts.iter().map(|(e, &k)| (e, k))
    }

    /// All terms in nondecreasing order, repeated by multiplicity.
    pub fn elements(&self) -> impl Iterator<Item = &GroupElement> {
        self.counts
            .iter()
            .flat_map(|(e, &k)| std::iter::repeat_n(e, k as usize))
    }

    pub fn max_multiplicity(&self) -> u64 {
        self.counts.values().copied().max().unwrap_or(0)
    }

    pub fn is_squarefree(&self) -> bool {
        self.max_multiplicity() <= 1
    }

    /// `T ≤ S` as multisets.
    pub fn is_subsequence_of(&self, other: &GroupSequence) -> bool {
        self.group == other.group && self.counts.iter().all(|(e, &k)| other.multiplicity(e) >= k)
    }

    /// `g + S`.
    pub fn shift(&self, g: &GroupElement) -> Result<Self> {
        let mut out = Self::empty(&self.group);
        for (e, &k) in &self.counts {
            out.push_n(self.group.add(e, g)?, k)?;
        }
        Ok(out)
    }

    /// `φ(S)`, elementwise image under a homomorphism.
    pub fn map(&self, phi: &Homomorphism) -> Result<Self> {
        phi.validate(&self.group)?;
        let target = phi.target(&self.group);
        let mut out = Self::empty(&target);
        for (e, &k) in &self.counts {
            out.push_n(phi.apply(&self.group, e)?, k)?;
        }
        Ok(out)
    }

    /// `S^k`: every multiplicity multiplied by `k`.
    pub fn power(&self, k: u64) -> Self {
        let mut out = Self::empty(&self.group);
        for (e, &m) in &self.counts {
            out.push_n(e.clone(), m * k)
                .expect("element belongs to the group");
        }
        out
    }

    /// `S·T`.
    pub fn concat(&self, other: &GroupSequence) -> Result<Self> {
        if self.group != other.group {
            return Err(Error::InvalidArgument(format!(
                "cannot concatenate sequences over {} and {}",
                self.group, other.group
            )));
        }
        let mut out = self.clone();
        for (e, &k) in &other.counts {
            out.push_n(e.clone(), k)?;
        }
        Ok(out)
    }

    /// Renders the sequence in the text format, header included.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let factors: Vec<String> = if self.group.is_trivial() {
            vec!["1".into()]
        } else {
            self.group.factors().iter().map(u64::to_string).collect()
        };
        writeln!(out, "group: {}", factors.join(",")).unwrap();
        out.push_str(&self.body_text());
        out
    }

    /// Element lines only, without the group header.
    pub fn body_text(&self) -> String {
        let mut out = String::new();
        for (e, &k) in &self.counts {
            writeln!(out, "{k} x {e}").unwrap();
        }
        out
    }

    /// Parses the text format. Errors carry 1-based line numbers.
    pub fn parse_text(text: &str) -> Result<Self> {
        let mut seq: Option<GroupSequence> = None;
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let perr = |message: String| Error::Parse {
                line: line_no,
                message,
            };
            if let Some(rest) = line.strip_prefix("group:") {
                if seq.is_some() {
                    return Err(perr("duplicate group header".into()));
                }
                let factors = parse_list(rest).map_err(perr)?;
                let group = GroupSpec::new(&factors).map_err(|e| perr(e.to_string()))?;
                seq = Some(GroupSequence::empty(&group));
                continue;
            }
            let Some(s) = seq.as_mut() else {
                return Err(perr(
                    "expected a `group:` header before element lines".into(),
                ));
            };
            let (mult, elem) = line
                .split_once('x')
                .ok_or_else(|| perr(format!("expected `<mult> x (c1,...,cr)`, got `{line}`")))?;
            let mult: u64 = mult
                .trim()
                .parse()
                .map_err(|_| perr(format!("invalid multiplicity `{}`", mult.trim())))?;
            if mult == 0 {
                return Err(perr("multiplicity must be positive".into()));
            }
            let elem = elem.trim();
            let inner = elem
                .strip_prefix('(')
                .and_then(|e| e.strip_suffix(')'))
                .ok_or_else(|| perr(format!("element must be parenthesised, got `{elem}`")))?;
            let coords = if inner.trim().is_empty() {
                Vec::new()
            } else {
                parse_list(inner).map_err(perr)?
            };
            let e = s.group.element(&coords).map_err(|e| perr(e.to_string()))?;
            s.push_n(e, mult).map_err(|e| perr(e.to_string()))?;
        }
        seq.ok_or(Error::Parse {
            line: text.lines().count().max(1),
            message: "missing `group:` header".into(),
        })
    }
}

fn parse_list(s: &str) -> std::result::Result<Vec<u64>, String> {
    s.split(',')
        .map(|t| {
            let t = t.trim();
            t.parse::<u64>()
                .map_err(|_| format!("expected a non-negative integer, got `{t}`"))
        })
        .collect()
}

impl fmt::Display for GroupSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .counts
            .iter()
            .map(|(e, &k)| {
                if k == 1 {
                    e.to_string()
                } else {
                    format!("{e}^{k}")
                }
            })
            .collect();
        f.write_str(&parts.join("·"))
    }
}

impl Serialize for GroupSequence {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_text())
    }
}

impl<'de> Deserialize<'de> for GroupSequence {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        GroupSequence::parse_text(&text).map_err(serde::de::Error::custom)
    }
}
