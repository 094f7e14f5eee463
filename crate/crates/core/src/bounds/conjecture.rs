//! Checks of two open conjectures against what the knowledge base proves.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{Pow, Zero};
use serde::{Deserialize, Serialize};

use super::{BigGroup, BoundRecord, KnowledgeBase};
use crate::error::{Error, Result};
use crate::search::Invariant;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Consistency {
    /// The proven value equals the conjectured one.
    Consistent,
    /// The proven bounds exclude the conjectured value.
    Inconsistent,
    /// The proven bounds admit the conjectured value without pinning it.
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Conj42Report {
    pub n: BigUint,
    pub r: usize,
    pub g_c3r: BigUint,
    /// `(g(C_3^r)−1)(n−1)+1`.
    pub conjectured: BigUint,
    pub status: Consistency,
    pub record: BoundRecord,
}

/// Compares `s(C_n^r) = (g(C_3^r)−1)(n−1)+1` for odd `n` with the base.
pub fn conjecture_42_check(
    kb: &KnowledgeBase,
    n: &BigUint,
    r: usize,
    g_c3r: &BigUint,
) -> Result<Conj42Report> {
    if n.is_even() || n.is_zero() {
        return Err(Error::PreconditionViolation(format!("n = {n} is not odd")));
    }
    if g_c3r.is_zero() {
        return Err(Error::PreconditionViolation(
            "g(C_3^r) must be positive".into(),
        ));
    }
    let conjectured = (g_c3r - 1u32) * (n - 1u32) + 1u32;
    let record = kb.query(Invariant::Egz, &BigGroup::homocyclic(n.clone(), r));
    let status = if !record.admits(&conjectured) {
        Consistency::Inconsistent
    } else if record.exact {
        Consistency::Consistent
    } else {
        Consistency::Unknown
    };
    Ok(Conj42Report {
        n: n.clone(),
        r,
        g_c3r: g_c3r.clone(),
        conjectured,
        status,
        record,
    })
}

/// The conjectured range `s(C_{2^a n}^r) = 2^r(2^a n−1)+1+α`, `0 ≤ α ≤ α_max`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Conj43Range {
    pub lower: BigInt,
    pub upper: BigInt,
    /// `n^r − 2^r n + 2^r + n − 2`.
    pub alpha_max: BigInt,
}

pub fn conjecture_43_alpha_range(n: &BigUint, r: usize, a: usize) -> Result<Conj43Range> {
    if n.is_zero() || r == 0 || a == 0 {
        return Err(Error::PreconditionViolation(
            "n, r and a must be at least 1".into(),
        ));
    }
    let n = BigInt::from(n.clone());
    let two_r = Pow::pow(BigInt::from(2), r);
    let two_a = Pow::pow(BigInt::from(2), a);
    let lower = &two_r * (two_a * &n - 1) + 1;
    let alpha_max = Pow::pow(&n, r) - &two_r * &n + &two_r + &n - 2;
    Ok(Conj43Range {
        upper: &lower + &alpha_max,
        lower,
        alpha_max,
    })
}
