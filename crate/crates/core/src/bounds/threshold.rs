//! Exact thresholds on `m` for the lifting theorem and its corollaries.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Pow, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ceiling of a rational threshold, and whether the division was exact.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Threshold {
    pub value: BigUint,
    pub exact_division: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

fn ceil_div(num: BigInt, den: BigInt) -> Threshold {
    debug_assert!(den.is_positive());
    let (q, r) = num.div_rem(&den);
    let exact = r.is_zero();
    let q = if !exact && num.is_positive() {
        q + 1
    } else {
        q
    };
    Threshold {
        // a non-positive threshold is no constraint on a positive m
        value: q.to_biguint().unwrap_or_default(),
        exact_division: exact,
        notes: Vec::new(),
    }
}

fn int(x: &BigUint) -> BigInt {
    BigInt::from(x.clone())
}

/// `⌈((c(n−1)+n)(n−1)(n^r−(c−1)) − (c−1)²) / (n−(c−1)²)⌉`.
///
/// Requires `n ≥ (c−1)²+1` and `c ≥ 1`.
pub fn theorem1_threshold(n: &BigUint, r: usize, c: &BigUint) -> Result<Threshold> {
    if c.is_zero() {
        return Err(Error::HypothesisViolation("c must be positive".into()));
    }
    let (n, c) = (int(n), int(c));
    let c1 = &c - 1;
    let floor = &c1 * &c1;
    if n <= floor {
        return Err(Error::HypothesisViolation(format!(
            "n = {n} is not at least (c-1)^2+1 = {}",
            &floor + 1
        )));
    }
    let num = (&c * (&n - 1) + &n) * (&n - 1) * (Pow::pow(&n, r) - &c1) - &floor;
    Ok(ceil_div(num, n - floor))
}

fn is_odd(n: &BigUint) -> bool {
    n.is_odd()
}

/// Strips all factors `p` from `n`.
fn strip(mut n: BigUint, p: u32) -> BigUint {
    let p = BigUint::from(p);
    while !n.is_zero() && (&n % &p).is_zero() {
        n /= &p;
    }
    n
}

/// `5q{(50nq−9)(5nq−1)(125n³q³−8)−64}/(qn−64)` with `q = n²−7`.
fn odd_rank_three(n: &BigInt) -> Threshold {
    let q = n * n - 7;
    let nq = n * &q;
    let num = BigInt::from(5)
        * &q
        * ((BigInt::from(50) * &nq - 9)
            * (BigInt::from(5) * &nq - 1)
            * (BigInt::from(125) * Pow::pow(&nq, 3u32) - 8)
            - 64);
    ceil_div(num, nq - 64)
}

/// Threshold on `m` in the four corollaries of the lifting theorem.
///
/// 1. `r = 3`, `c = 9`, `n ≥ 65` odd, `m = 3^a 5^b`.
/// 2. `r = 4`, `c = 20`, `n ≥ 362` odd, `m = 3^a`.
/// 3. `r ≥ 1`, `c = 2^r`, `n ≥ (2^r−1)²+1` even, `m = 2^a`.
/// 4. `r = 3`, `c = 9`, `n = 7^x 11^y 13^z ≥ 65`; same formula as 1.
pub fn application_threshold(app: u8, n: &BigUint, r: Option<usize>) -> Result<Threshold> {
    let ni = int(n);
    match app {
        1 | 4 => {
            if r.is_some_and(|r| r != 3) {
                return Err(Error::PreconditionViolation(format!(
                    "application {app} has r = 3"
                )));
            }
            if n < &BigUint::from(65u32) {
                return Err(Error::PreconditionViolation(format!("n = {n} is below 65")));
            }
            if app == 1 && !is_odd(n) {
                return Err(Error::PreconditionViolation(format!("n = {n} is not odd")));
            }
            if app == 4 && !strip(strip(strip(n.clone(), 7), 11), 13).is_one() {
                return Err(Error::PreconditionViolation(format!(
                    "n = {n} has a prime divisor outside {{7, 11, 13}}"
                )));
            }
            Ok(odd_rank_three(&ni))
        }
        2 => {
            if r.is_some_and(|r| r != 4) {
                return Err(Error::PreconditionViolation(
                    "application 2 has r = 4".into(),
                ));
            }
            if n < &BigUint::from(362u32) {
                return Err(Error::PreconditionViolation(format!(
                    "n = {n} is below 362"
                )));
            }
            if !is_odd(n) {
                return Err(Error::PreconditionViolation(format!("n = {n} is not odd")));
            }
            // 3q{(63nq−20)(3nq−1)(81n⁴q⁴−19)−361}/(qn−361), q = n³−18
            let q = Pow::pow(&ni, 3u32) - 18;
            let nq = &ni * &q;
            let num = BigInt::from(3)
                * &q
                * ((BigInt::from(63) * &nq - 20)
                    * (BigInt::from(3) * &nq - 1)
                    * (BigInt::from(81) * Pow::pow(&nq, 4u32) - 19)
                    - 361);
            Ok(ceil_div(num, nq - 361))
        }
        3 => {
            let r =
                r.ok_or_else(|| Error::PreconditionViolation("application 3 needs r".into()))?;
            if r == 0 {
                return Err(Error::PreconditionViolation("r must be at least 1".into()));
            }
            let two_r = Pow::pow(BigInt::from(2), r);
            let c1 = &two_r - 1;
            let floor = &c1 * &c1;
            if ni <= floor {
                return Err(Error::PreconditionViolation(format!(
                    "n = {n} is below (2^r-1)^2+1 = {}",
                    &floor + 1
                )));
            }
            if is_odd(n) {
                return Err(Error::PreconditionViolation(format!("n = {n} is not even")));
            }
            // 2n^{r−1}{(2n^r(2^r+1)−2^r)(2n^r−1)((2n^r)^r−(2^r−1))−(2^r−1)²}/(n^r−(2^r−1)²)
            let nr = Pow::pow(&ni, r);
            let two_nr = BigInt::from(2) * &nr;
            let num = BigInt::from(2)
                * Pow::pow(&ni, r - 1)
                * ((&two_nr * (&two_r + 1) - &two_r)
                    * (&two_nr - 1)
                    * (Pow::pow(&two_nr, r) - &c1)
                    - &floor);
            let mut t = ceil_div(num, nr - floor);
            t.notes.push(
                "the displayed threshold ends in a stray '.' after the closing brace; \
                 read as end of sentence and dropped"
                    .into(),
            );
            Ok(t)
        }
        _ => Err(Error::InvalidArgument(format!(
            "no application {app}; expected 1 to 4"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(s: &str) -> BigUint {
        s.parse().unwrap()
    }

    fn thm1(n: u64, r: usize, c: u64) -> Threshold {
        theorem1_threshold(&n.into(), r, &c.into()).unwrap()
    }

    #[test]
    fn theorem1_examples() {
        let t = thm1(65, 3, 9);
        assert_eq!(t.value, big("11265887744"));
        assert!(t.exact_division);
        assert_eq!(thm1(2, 1, 1).value, big("3"));
        assert!(matches!(
            theorem1_threshold(&64u32.into(), 3, &9u32.into()),
            Err(Error::HypothesisViolation(_))
        ));
    }

    #[test]
    fn inexact_division_rounds_up() {
        let t = thm1(3159, 3, 9);
        assert_eq!(t.value, big("1015842146896935"));
        assert!(!t.exact_division);
    }

    #[test]
    fn application_preconditions() {
        let bad = |app, n: u64, r| {
            matches!(
                application_threshold(app, &n.into(), r),
                Err(Error::PreconditionViolation(_))
            )
        };
        assert!(bad(1, 64, None));
        assert!(bad(1, 63, None));
        assert!(bad(2, 361, None));
        assert!(bad(2, 364, None));
        assert!(bad(3, 3, Some(1)));
        assert!(bad(3, 1, Some(1)));
        assert!(bad(3, 8, Some(2)));
        assert!(bad(4, 65, None));
        assert!(bad(4, 75, None));
        assert!(application_threshold(4, &77u32.into(), None).is_ok());
        assert!(application_threshold(5, &77u32.into(), None).is_err());
    }

    #[test]
    fn application_values() {
        let a1 = application_threshold(1, &65u32.into(), None).unwrap();
        assert_eq!(a1.value, big("3724835670712249722131487655617"));
        assert!(!a1.exact_division);
        let a3 = application_threshold(3, &2u32.into(), Some(1)).unwrap();
        assert_eq!(a3.value, big("178"));
        assert!(a3.exact_division);
        assert_eq!(a3.notes.len(), 1);
    }
}
