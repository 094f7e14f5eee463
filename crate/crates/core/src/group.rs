//! Finite abelian groups in invariant-factor form.
//!
//! A group is `C_{n_1} ⊕ … ⊕ C_{n_r}` with `n_i | n_{i+1}`. Elements are
//! coordinate vectors reduced modulo the matching invariant factor. Searches
//! work on a packed representation: every element maps to a mixed-radix
//! index in `[0, |G|)`, with the first coordinate most significant, so that
//! comparing indices agrees with comparing coordinate vectors.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite abelian group `C_{n_1} ⊕ … ⊕ C_{n_r}` with `n_1 | … | n_r`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct GroupSpec {
    factors: Vec<u64>,
    order: u64,
}

impl GroupSpec {
    /// Validates an invariant-factor chain. Factors equal to 1 are trivial
    /// summands and are dropped; an all-ones list yields the trivial group.
    pub fn new(invariant_factors: &[u64]) -> Result<Self> {
        if invariant_factors.is_empty() {
            return Err(Error::InvalidArgument(
                "a group needs at least one invariant factor".into(),
            ));
        }
        if let Some(pos) = invariant_factors.iter().position(|&n| n == 0) {
            return Err(Error::InvalidArgument(format!(
                "invariant factor at position {pos} is zero"
            )));
        }
        let factors: Vec<u64> = invariant_factors
            .iter()
            .copied()
            .filter(|&n| n > 1)
            .collect();
        for w in factors.windows(2) {
            if w[1] % w[0] != 0 {
                return Err(Error::DivisibilityViolation(w[0], w[1]));
            }
        }
        let order = factors
            .iter()
            .try_fold(1u64, |acc, &n| acc.checked_mul(n))
            .ok_or(Error::GroupTooLarge)?;
        Ok(Self { factors, order })
    }

    pub fn trivial() -> Self {
        Self {
            factors: Vec::new(),
            order: 1,
        }
    }

    pub fn cyclic(n: u64) -> Result<Self> {
        Self::new(&[n])
    }

    /// `C_n^r`.
    pub fn homocyclic(n: u64, r: usize) -> Result<Self> {
        if r == 0 {
            return Ok(Self::trivial());
        }
        Self::new(&vec![n; r])
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn exponent(&self) -> u64 {
        self.factors.last().copied().unwrap_or(1)
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn is_homocyclic(&self) -> bool {
        self.factors.windows(2).all(|w| w[0] == w[1])
    }

    /// `(n, r)` when the group is `C_n^r` with `r ≥ 1`.
    pub fn homocyclic_params(&self) -> Option<(u64, usize)> {
        if self.is_trivial() || !self.is_homocyclic() {
            None
        } else {
            Some((self.exponent(), self.rank()))
        }
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement(vec![0; self.rank()])
    }

    /// Builds an element from already reduced coordinates.
    pub fn element(&self, coords: &[u64]) -> Result<GroupElement> {
        let e = GroupElement(coords.to_vec());
        self.check(&e)?;
        Ok(e)
    }

    /// Builds an element, reducing each coordinate modulo its factor.
    pub fn element_reduced(&self, coords: &[i64]) -> Result<GroupElement> {
        self.check_rank(coords.len())?;
        Ok(GroupElement(
            coords
                .iter()
                .zip(&self.factors)
                .map(|(&c, &n)| c.rem_euclid(n as i64) as u64)
                .collect(),
        ))
    }

    pub fn contains(&self, e: &GroupElement) -> bool {
        self.check(e).is_ok()
    }

    pub(crate) fn check(&self, e: &GroupElement) -> Result<()> {
        self.check_rank(e.0.len())?;
        for (position, (&coord, &modulus)) in e.0.iter().zip(&self.factors).enumerate() {
            if coord >= modulus {
                return Err(Error::InvalidElement {
                    position,
                    coord,
                    modulus,
                });
            }
        }
        Ok(())
    }

    fn check_rank(&self, found: usize) -> Result<()> {
        if found != self.rank() {
            return Err(Error::RankMismatch {
                expected: self.rank(),
                found,
            });
        }
        Ok(())
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(GroupElement(
            a.0.iter()
                .zip(&b.0)
                .zip(&self.factors)
                .map(|((&x, &y), &n)| (x + y) % n)
                .collect(),
        ))
    }

    pub fn neg(&self, a: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        Ok(GroupElement(
            a.0.iter()
                .zip(&self.factors)
                .map(|(&x, &n)| (n - x) % n)
                .collect(),
        ))
    }

    pub fn sub(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.add(a, &self.neg(b)?)
    }

    /// `k·a`, coordinatewise.
    pub fn scale(&self, k: i64, a: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        Ok(GroupElement(
            a.0.iter()
                .zip(&self.factors)
                .map(|(&x, &n)| mul_mod(k.rem_euclid(n as i64) as u64, x, n))
                .collect(),
        ))
    }

    /// Order of `a` in the group.
    pub fn order_of(&self, a: &GroupElement) -> Result<u64> {
        self.check(a)?;
        Ok(a.0
            .iter()
            .zip(&self.factors)
            .map(|(&x, &n)| n / x.gcd(&n))
            .fold(1, |acc, o| acc.lcm(&o)))
    }

    /// Packed mixed-radix index of `a`.
    pub fn index_of(&self, a: &GroupElement) -> Result<u64> {
        self.check(a)?;
        Ok(a.0
            .iter()
            .zip(&self.factors)
            .fold(0, |acc, (&x, &n)| acc * n + x))
    }

    pub fn element_at(&self, mut index: u64) -> Result<GroupElement> {
        if index >= self.order {
            return Err(Error::InvalidArgument(format!(
                "index {index} out of range for a group of order {}",
                self.order
            )));
        }
        let mut coords = vec![0; self.rank()];
        for (c, &n) in coords.iter_mut().zip(&self.factors).rev() {
            *c = index % n;
            index /= n;
        }
        Ok(GroupElement(coords))
    }

    /// All elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.order).map(move |i| self.element_at(i).expect("index in range"))
    }
}

impl TryFrom<Vec<u64>> for GroupSpec {
    type Error = Error;

    fn try_from(factors: Vec<u64>) -> Result<Self> {
        if factors.is_empty() {
            return Ok(Self::trivial());
        }
        Self::new(&factors)
    }
}

impl From<GroupSpec> for Vec<u64> {
    fn from(g: GroupSpec) -> Self {
        g.factors
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some((n, r)) = self.homocyclic_params() {
            return if r == 1 {
                write!(f, "C_{n}")
            } else {
                write!(f, "C_{n}^{r}")
            };
        }
        if self.is_trivial() {
            return write!(f, "C_1");
        }
        let parts: Vec<String> = self.factors.iter().map(|n| format!("C_{n}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// An element of a [`GroupSpec`], as reduced coordinates.
///
/// The derived ordering is lexicographic on coordinates, which matches the
/// packed index order of the owning group.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupElement(Vec<u64>);

impl GroupElement {
    pub fn coords(&self) -> &[u64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

pub(crate) fn mul_mod(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 * b as u128) % n as u128) as u64
}

/// A group homomorphism out of a source group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Homomorphism {
    /// `x ↦ m·x`, an endomorphism.
    Multiply(i64),
    /// `y_i = Σ_j matrix[i][j]·x_j mod m_i` into `target`.
    Matrix {
        target: GroupSpec,
        matrix: Vec<Vec<i64>>,
    },
}

impl Homomorphism {
    pub fn target(&self, source: &GroupSpec) -> GroupSpec {
        match self {
            Homomorphism::Multiply(_) => source.clone(),
            Homomorphism::Matrix { target, .. } => target.clone(),
        }
    }

    /// A coordinate matrix is a homomorphism iff the image of each generator
    /// `e_j` has order dividing `n_j`.
    pub fn validate(&self, source: &GroupSpec) -> Result<()> {
        let Homomorphism::Matrix { target, matrix } = self else {
            return Ok(());
        };
        if matrix.len() != target.rank() {
            return Err(Error::InvalidHomomorphism(format!(
                "matrix has {} rows, target rank is {}",
                matrix.len(),
                target.rank()
            )));
        }
        for (i, row) in matrix.iter().enumerate() {
            if row.len() != source.rank() {
                return Err(Error::InvalidHomomorphism(format!(
                    "row {i} has {} entries, source rank is {}",
                    row.len(),
                    source.rank()
                )));
            }
            let m_i = target.factors()[i] as i128;
            for (j, &entry) in row.iter().enumerate() {
                let n_j = source.factors()[j] as i128;
                if (n_j * entry as i128).rem_euclid(m_i) != 0 {
                    return Err(Error::InvalidHomomorphism(format!(
                        "entry ({i},{j}) = {entry} does not respect orders: {n_j}·{entry} ≢ 0 mod {m_i}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn apply(&self, source: &GroupSpec, x: &GroupElement) -> Result<GroupElement> {
        match self {
            Homomorphism::Multiply(m) => source.scale(*m, x),
            Homomorphism::Matrix { target, matrix } => {
                source.check(x)?;
                let coords: Vec<i64> = matrix
                    .iter()
                    .zip(target.factors())
                    .map(|(row, &m)| {
                        let m = m as i128;
                        row.iter()
                            .zip(x.coords())
                            .map(|(&a, &c)| (a as i128).rem_euclid(m) * c as i128 % m)
                            .sum::<i128>()
                            .rem_euclid(m) as i64
                    })
                    .collect();
                target.element_reduced(&coords)
            }
        }
    }
}

/// Table-driven arithmetic on packed element indices.
///
/// Searches index arrays by element; this keeps addition a table lookup for
/// the group sizes they handle.
#[derive(Clone, Debug)]
pub struct PackedGroup {
    spec: GroupSpec,
    order: u32,
    digits: Vec<u32>,
    add: Option<Vec<u32>>,
    neg: Vec<u32>,
}

const ADD_TABLE_LIMIT: u64 = 2048;

impl PackedGroup {
    pub fn new(spec: &GroupSpec) -> Result<Self> {
        if spec.order() > u32::MAX as u64 / 2 {
            return Err(Error::Unsupported(format!(
                "{spec} is too large for packed search"
            )));
        }
        let order = spec.order() as u32;
        let r = spec.rank();
        let mut digits = vec![0u32; order as usize * r];
        for idx in 0..order {
            let e = spec.element_at(idx as u64)?;
            for (k, &c) in e.coords().iter().enumerate() {
                digits[idx as usize * r + k] = c as u32;
            }
        }
        let mut g = Self {
            spec: spec.clone(),
            order,
            digits,
            add: None,
            neg: Vec::new(),
        };
        g.neg = (0..order).map(|x| g.neg_slow(x)).collect();
        if spec.order() <= ADD_TABLE_LIMIT {
            let mut table = vec![0u32; (order * order) as usize];
            for a in 0..order {
                for b in 0..order {
                    table[(a * order + b) as usize] = g.add_slow(a, b);
                }
            }
            g.add = Some(table);
        }
        Ok(g)
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn rank(&self) -> usize {
        self.spec.rank()
    }

    pub fn digits(&self, x: u32) -> &[u32] {
        let r = self.rank();
        &self.digits[x as usize * r..(x as usize + 1) * r]
    }

    pub fn encode(&self, digits: &[u32]) -> u32 {
        digits
            .iter()
            .zip(self.spec.factors())
            .fold(0, |acc, (&d, &n)| acc * n as u32 + d)
    }

    fn add_slow(&self, a: u32, b: u32) -> u32 {
        let (da, db) = (self.digits(a), self.digits(b));
        let mut acc = 0u32;
        for k in 0..self.rank() {
            let n = self.spec.factors()[k] as u32;
            acc = acc * n + (da[k] + db[k]) % n;
        }
        acc
    }

    fn neg_slow(&self, a: u32) -> u32 {
        let da = self.digits(a);
        let mut acc = 0u32;
        for (&n, &d) in self.spec.factors().iter().zip(da) {
            let n = n as u32;
            acc = acc * n + (n - d) % n;
        }
        acc
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        match &self.add {
            Some(t) => t[(a * self.order + b) as usize],
            None => self.add_slow(a, b),
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        self.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    pub fn scale(&self, k: u64, a: u32) -> u32 {
        let da = self.digits(a);
        let mut acc = 0u32;
        for (k_i, &n) in self.spec.factors().iter().enumerate() {
            acc = acc * n as u32 + mul_mod(k % n, da[k_i] as u64, n) as u32;
        }
        acc
    }

    pub fn element(&self, x: u32) -> GroupElement {
        GroupElement(self.digits(x).iter().map(|&d| d as u64).collect())
    }

    pub fn index(&self, e: &GroupElement) -> u32 {
        self.encode(&e.coords().iter().map(|&c| c as u32).collect::<Vec<_>>())
    }
}
