//! Closed-form values and number-theoretic helpers used by the rules.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::BigGroup;

/// Trial division stops here; whatever is left is kept as one opaque factor.
const TRIAL_LIMIT: u64 = 100_000;

/// `n = ∏ p_i^{e_i}`; the last entry may be an unfactored cofactor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Factorization {
    pub primes: Vec<(BigUint, u32)>,
    /// Whether the last base is a leftover that may be composite.
    pub opaque_tail: bool,
}

impl Factorization {
    pub fn of(n: &BigUint) -> Self {
        let mut rest = n.clone();
        let mut primes = Vec::new();
        let mut p = 2u64;
        while p <= TRIAL_LIMIT && !rest.is_one() {
            let bp = BigUint::from(p);
            if &bp * &bp > rest {
                break;
            }
            let mut e = 0;
            while (&rest % &bp).is_zero() {
                rest /= &bp;
                e += 1;
            }
            if e > 0 {
                primes.push((bp, e));
            }
            p += if p == 2 { 1 } else { 2 };
        }
        let mut opaque_tail = false;
        if !rest.is_one() && !rest.is_zero() {
            // below the square of the next trial prime the leftover is prime
            opaque_tail = BigUint::from(p) * BigUint::from(p) <= rest;
            primes.push((rest, 1));
        }
        Self {
            primes,
            opaque_tail,
        }
    }

    /// Whether every prime divisor lies in `allowed`; false if unknown.
    pub fn supported_on(&self, allowed: &[u64]) -> bool {
        !self.opaque_tail
            && self
                .primes
                .iter()
                .all(|(p, _)| p.to_u64().is_some_and(|p| allowed.contains(&p)))
    }

    /// Exponent of `p`, if `p` is one of the known prime bases.
    pub fn exponent_of(&self, p: u64) -> u32 {
        self.primes
            .iter()
            .find(|(q, _)| q.to_u64() == Some(p))
            .map_or(0, |(_, e)| *e)
    }

    pub fn divisor_count(&self) -> u128 {
        self.primes.iter().map(|(_, e)| *e as u128 + 1).product()
    }

    /// All divisors, ascending.
    pub fn divisors(&self) -> Vec<BigUint> {
        self.divisors_factored()
            .into_iter()
            .map(|(d, _)| d)
            .collect()
    }

    /// All divisors with their factorizations, ascending.
    pub fn divisors_factored(&self) -> Vec<(BigUint, Factorization)> {
        let mut out = vec![(
            BigUint::one(),
            Factorization {
                primes: vec![],
                opaque_tail: false,
            },
        )];
        let last = self.primes.len().wrapping_sub(1);
        for (i, (p, e)) in self.primes.iter().enumerate() {
            let mut next = Vec::with_capacity(out.len() * (*e as usize + 1));
            for (d, f) in &out {
                let mut x = d.clone();
                for k in 0..=*e {
                    let mut g = f.clone();
                    if k > 0 {
                        g.primes.push((p.clone(), k));
                        g.opaque_tail = self.opaque_tail && i == last;
                    }
                    next.push((x.clone(), g));
                    x *= p;
                }
            }
            out = next;
        }
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }
}

/// `k` with `n = p^k`, if any.
pub(crate) fn log_exact(n: &BigUint, p: u64) -> Option<u32> {
    let p = BigUint::from(p);
    let mut rest = n.clone();
    let mut k = 0;
    while rest > BigUint::one() {
        let (q, r) = rest.div_rem(&p);
        if !r.is_zero() {
            return None;
        }
        rest = q;
        k += 1;
    }
    rest.is_one().then_some(k)
}

pub(crate) fn pow2(k: usize) -> BigUint {
    BigUint::one() << k
}

/// `s` and `D` for rank at most two: `2n_1+2n_2−3` and `n_1+n_2−1`.
pub(crate) fn rank_two(group: &BigGroup) -> Option<(BigUint, BigUint)> {
    let one = BigUint::one();
    let (n1, n2) = match group.factors() {
        [] => (one.clone(), one.clone()),
        [n] => (one.clone(), n.clone()),
        [a, b] => (a.clone(), b.clone()),
        _ => return None,
    };
    let s = BigUint::from(2u32) * (&n1 + &n2) - 3u32;
    let d = n1 + n2 - 1u32;
    Some((s, d))
}

/// `s(C_{2^a} ⊕ C_{2^b}^{r−1}) = 2^{r−1}(2^a+2^b−2)+1` for `r ≥ 2`, `1 ≤ a ≤ b`.
pub(crate) fn two_power_mixed(group: &BigGroup) -> Option<BigUint> {
    let f = group.factors();
    if f.len() < 2 {
        return None;
    }
    let a = log_exact(&f[0], 2).filter(|&a| a >= 1)?;
    let b = log_exact(&f[1], 2)?;
    if f[1..].iter().any(|x| x != &f[1]) || a > b {
        return None;
    }
    let r = f.len();
    Some(pow2(r - 1) * (pow2(a as usize) + pow2(b as usize) - 2u32) + 1u32)
}

/// `c(n−1)+1`.
pub(crate) fn linear(c: u64, n: &BigUint) -> BigUint {
    BigUint::from(c) * (n - 1u32) + 1u32
}

/// The homocyclic families with cited exact `s`: `(rule, c)` with `s = c(n−1)+1`.
pub(crate) fn homocyclic_family(f: &Factorization, r: usize) -> Option<(super::Rule, u64)> {
    use super::Rule;
    if f.primes.is_empty() {
        return None;
    }
    match r {
        3 if f.supported_on(&[3, 5]) => Some((Rule::ThreeFiveRankThree, 9)),
        4 if f.supported_on(&[3]) => Some((Rule::ThreePowerRankFour, 20)),
        3 if f.supported_on(&[2, 3]) && f.exponent_of(3) == 1 && f.exponent_of(2) >= 1 => {
            Some((Rule::ThreeTwoPowerRankThree, 8))
        }
        _ => None,
    }
}

/// The `q`-Sylow subgroup of `group`.
pub(crate) fn sylow(group: &BigGroup, q: &BigUint) -> BigGroup {
    let parts = group
        .factors()
        .iter()
        .map(|f| {
            let mut part = BigUint::one();
            let mut rest = f.clone();
            while (&rest % q).is_zero() {
                rest /= q;
                part *= q;
            }
            part
        })
        .collect();
    BigGroup::new(parts).expect("Sylow parts of a chain form a chain")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(f: &[u64]) -> BigGroup {
        BigGroup::new(f.iter().map(|&x| BigUint::from(x)).collect()).unwrap()
    }

    #[test]
    fn factorization_and_divisors() {
        let f = Factorization::of(&BigUint::from(360u32));
        assert_eq!(f.divisor_count(), 24);
        let d = f.divisors();
        assert_eq!(d.len(), 24);
        assert_eq!(d.first(), Some(&BigUint::one()));
        assert_eq!(d.last(), Some(&BigUint::from(360u32)));
        for (x, fx) in f.divisors_factored() {
            assert_eq!(fx, Factorization::of(&x));
        }
        assert!(f.supported_on(&[2, 3, 5]));
        assert!(!f.supported_on(&[2, 3]));
        let big_prime = BigUint::from(1_000_000_007u64);
        let f = Factorization::of(&big_prime);
        assert_eq!(f.primes, vec![(big_prime.clone(), 1)]);
        assert!(!f.opaque_tail);
        let f = Factorization::of(&(&big_prime * &big_prime * 3u32));
        assert!(f.opaque_tail);
    }

    #[test]
    fn closed_forms() {
        assert_eq!(rank_two(&g(&[])).unwrap(), (1u32.into(), 1u32.into()));
        assert_eq!(rank_two(&g(&[5, 5])).unwrap(), (17u32.into(), 9u32.into()));
        assert_eq!(rank_two(&g(&[7])).unwrap(), (13u32.into(), 7u32.into()));
        assert_eq!(two_power_mixed(&g(&[4, 4])), Some(13u32.into()));
        assert_eq!(two_power_mixed(&g(&[2, 2, 2])), Some(9u32.into()));
        assert_eq!(two_power_mixed(&g(&[2, 2, 2, 2])), Some(17u32.into()));
        assert_eq!(two_power_mixed(&g(&[2, 4, 4])), Some(17u32.into()));
        assert_eq!(two_power_mixed(&g(&[2, 4, 8])), None);
        assert_eq!(sylow(&g(&[6, 12]), &BigUint::from(2u32)), g(&[2, 4]));
        assert_eq!(log_exact(&BigUint::from(81u32), 3), Some(4));
        assert_eq!(log_exact(&BigUint::from(1u32), 3), Some(0));
        assert_eq!(log_exact(&BigUint::from(12u32), 3), None);
    }
}
