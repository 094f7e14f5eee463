//! Bounds for `D`, `s` and `g` from known values and inference rules.
//!
//! Groups here carry arbitrary-precision invariant factors so that the
//! lifting theorem can be applied to exponents far beyond a machine word.
//! Every bound carries a trace: the rule applications that produced it,
//! each naming its premises and whether it rests on a cited result, a
//! machine verification, or arithmetic on other records.

mod conjecture;
mod kb;
mod rules;
mod threshold;

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::GroupSpec;
use crate::search::Invariant;

pub use conjecture::{
    conjecture_42_check, conjecture_43_alpha_range, Conj42Report, Conj43Range, Consistency,
};
pub use kb::{apply_rules, seed_knowledge_base, KnowledgeBase, Theorem1Hypotheses};
pub use threshold::{application_threshold, theorem1_threshold, Threshold};

/// A finite abelian group `C_{n_1} ⊕ … ⊕ C_{n_r}` with `n_1 | … | n_r`,
/// factors of any size.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BigGroup {
    factors: Vec<BigUint>,
}

impl BigGroup {
    /// Factors equal to 1 are dropped.
    pub fn new(factors: Vec<BigUint>) -> Result<Self> {
        let factors: Vec<BigUint> = factors.into_iter().filter(|f| !f.is_one()).collect();
        if factors.iter().any(Zero::is_zero) {
            return Err(Error::InvalidArgument(
                "invariant factors must be positive".into(),
            ));
        }
        for w in factors.windows(2) {
            if !(&w[1] % &w[0]).is_zero() {
                return Err(Error::InvalidArgument(format!(
                    "invariant factors must form a divisibility chain: {} does not divide {}",
                    w[0], w[1]
                )));
            }
        }
        Ok(Self { factors })
    }

    /// `C_n^r`; `n = 1` or `r = 0` gives the trivial group.
    pub fn homocyclic(n: BigUint, r: usize) -> Self {
        if n.is_zero() || n.is_one() {
            return Self { factors: vec![] };
        }
        Self {
            factors: vec![n; r],
        }
    }

    pub fn factors(&self) -> &[BigUint] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn exponent(&self) -> BigUint {
        self.factors.last().cloned().unwrap_or_else(BigUint::one)
    }

    pub fn order(&self) -> BigUint {
        self.factors.iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    /// `(n, r)` when the group is `C_n^r` with `n ≥ 2`.
    pub fn homocyclic_params(&self) -> Option<(&BigUint, usize)> {
        let first = self.factors.first()?;
        self.factors
            .iter()
            .all(|f| f == first)
            .then_some((first, self.factors.len()))
    }
}

impl From<&GroupSpec> for BigGroup {
    fn from(g: &GroupSpec) -> Self {
        Self {
            factors: g.factors().iter().map(|&f| BigUint::from(f)).collect(),
        }
    }
}

impl fmt::Display for BigGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.homocyclic_params() {
            _ if self.is_trivial() => write!(f, "C_1"),
            Some((n, 1)) => write!(f, "C_{n}"),
            Some((n, r)) => write!(f, "C_{n}^{r}"),
            None => {
                let parts: Vec<String> = self.factors.iter().map(|n| format!("C_{n}")).collect();
                write!(f, "{}", parts.join(" + "))
            }
        }
    }
}

/// The fixed rule set. Identifiers are stable and appear in traces.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    /// A value stored in the base: cited or machine-verified.
    KnownValue,
    /// Exact `D` and `s` for rank at most two.
    RankAtMostTwo,
    /// `s(C_{2^a} ⊕ C_{2^b}^{r−1}) = 2^{r−1}(2^a+2^b−2)+1`.
    TwoPowerMixed,
    /// `s(C_{3^a 5^b}^3) = 9(3^a 5^b−1)+1`.
    ThreeFiveRankThree,
    /// `s(C_{3^a}^4) = 20(3^a−1)+1`.
    ThreePowerRankFour,
    /// `s(C_{3·2^a}^3) = 8(3·2^a−1)+1`.
    ThreeTwoPowerRankThree,
    /// Odd `p`-groups with `D(G) = 2exp(G)−1` have `s(G) = 4exp(G)−3`.
    OddPGroupDavenport,
    /// Groups with one non-cyclic odd Sylow subgroup of suitable Davenport constant.
    SylowDivisibility,
    /// `s(G) ≤ |G|+exp(G)−1`.
    OrderPlusExponent,
    /// `s(G) ≤ (s(H)−1)·exp(G/H) + s(G/H)`.
    SubgroupComposition,
    /// `s(C_n^r) ≥ 2^r(n−1)+1`.
    BinaryCubeLowerBound,
    /// `s(C_n^3) ≥ 9n−8` for odd `n`.
    OddRankThreeLowerBound,
    /// `s(C_n^4) ≥ 20n−19` for odd `n`.
    OddRankFourLowerBound,
    /// `s(G)` and `g(G)` are at least `exp(G)`.
    ExponentFloor,
    /// `g(G) ≤ s(G) ≤ (g(G)−1)(exp(G)−1)+1`.
    SquarefreeSandwich,
    /// `s(C_3^r) = 2g(C_3^r)−1`.
    TernaryCapIdentity,
    /// `s(C_{mn}^r) ≤ c(mn−1)+1` from Property D on `C_m^r` and D0 on `C_n^r`.
    LiftingTheorem,
    /// Property D for `C_{2^a}^r`, `C_{3^a}^4` and `C_{3^a 5^b}^3`.
    PropertyDKnownFamilies,
    /// Equality in the squarefree sandwich forces Property D.
    PropertyDFromSandwich,
    /// Property D passes from `C_m^r`, `C_n^r` to `C_{mn}^r` when `s` is exact.
    PropertyDProduct,
    /// Property D0 for `C_n^3`, `c = 9`, `n` odd with prime divisors in {3, 5, 7, 11, 13}.
    D0KnownFamilies,
    /// `s(C_n^r) = c(n−1)+1` implies Property D0 with respect to `c`.
    D0FromExactS,
    /// Property D0 is multiplicative.
    D0Product,
}

impl Rule {
    pub const ALL: [Rule; 23] = [
        Rule::KnownValue,
        Rule::RankAtMostTwo,
        Rule::TwoPowerMixed,
        Rule::ThreeFiveRankThree,
        Rule::ThreePowerRankFour,
        Rule::ThreeTwoPowerRankThree,
        Rule::OddPGroupDavenport,
        Rule::SylowDivisibility,
        Rule::OrderPlusExponent,
        Rule::SubgroupComposition,
        Rule::BinaryCubeLowerBound,
        Rule::OddRankThreeLowerBound,
        Rule::OddRankFourLowerBound,
        Rule::ExponentFloor,
        Rule::SquarefreeSandwich,
        Rule::TernaryCapIdentity,
        Rule::LiftingTheorem,
        Rule::PropertyDKnownFamilies,
        Rule::PropertyDFromSandwich,
        Rule::PropertyDProduct,
        Rule::D0KnownFamilies,
        Rule::D0FromExactS,
        Rule::D0Product,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Rule::KnownValue => "known-value",
            Rule::RankAtMostTwo => "rank-at-most-two",
            Rule::TwoPowerMixed => "two-power-mixed",
            Rule::ThreeFiveRankThree => "three-five-rank-three",
            Rule::ThreePowerRankFour => "three-power-rank-four",
            Rule::ThreeTwoPowerRankThree => "three-two-power-rank-three",
            Rule::OddPGroupDavenport => "odd-p-group-davenport",
            Rule::SylowDivisibility => "sylow-divisibility",
            Rule::OrderPlusExponent => "order-plus-exponent",
            Rule::SubgroupComposition => "subgroup-composition",
            Rule::BinaryCubeLowerBound => "binary-cube-lower-bound",
            Rule::OddRankThreeLowerBound => "odd-rank-three-lower-bound",
            Rule::OddRankFourLowerBound => "odd-rank-four-lower-bound",
            Rule::ExponentFloor => "exponent-floor",
            Rule::SquarefreeSandwich => "squarefree-sandwich",
            Rule::TernaryCapIdentity => "ternary-cap-identity",
            Rule::LiftingTheorem => "lifting-theorem",
            Rule::PropertyDKnownFamilies => "property-d-known-families",
            Rule::PropertyDFromSandwich => "property-d-from-sandwich",
            Rule::PropertyDProduct => "property-d-product",
            Rule::D0KnownFamilies => "d0-known-families",
            Rule::D0FromExactS => "d0-from-exact-s",
            Rule::D0Product => "d0-product",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl std::str::FromStr for Rule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Rule::ALL
            .into_iter()
            .find(|r| r.id() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown rule {s:?}")))
    }
}

/// What a trace step ultimately rests on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Evidence {
    /// A published result, trusted as stated.
    Cited,
    /// An exhaustive computation by this crate.
    MachineVerified,
    /// Arithmetic on other records.
    Derived,
}

/// One rule application.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub rule: Rule,
    pub conclusion: String,
    pub premises: Vec<String>,
    pub evidence: Evidence,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Bounds on one invariant of one group.
///
/// `upper = None` stands for no known upper bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundRecord {
    pub invariant: Invariant,
    pub group: BigGroup,
    pub lower: BigUint,
    pub upper: Option<BigUint>,
    pub exact: bool,
    pub trace: Vec<TraceStep>,
}

impl BoundRecord {
    pub fn value(&self) -> Option<&BigUint> {
        self.exact.then_some(&self.lower)
    }

    /// Whether `x` lies in `[lower, upper]`.
    pub fn admits(&self, x: &BigUint) -> bool {
        x >= &self.lower && self.upper.as_ref().is_none_or(|u| x <= u)
    }

    pub fn uses_rule(&self, rule: Rule) -> bool {
        self.trace.iter().any(|s| s.rule == rule)
    }
}

impl fmt::Display for BoundRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sym = self.invariant.symbol();
        match (&self.upper, self.exact) {
            (_, true) => write!(f, "{sym}({}) = {}", self.group, self.lower),
            (Some(u), false) => write!(f, "{} <= {sym}({}) <= {u}", self.lower, self.group),
            (None, false) => write!(f, "{sym}({}) >= {}", self.group, self.lower),
        }
    }
}
