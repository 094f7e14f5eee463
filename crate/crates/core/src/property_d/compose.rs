//! Multiplicativity of Property D0, as an explicit construction.
//!
//! Let `G = C_{mn}^r` and `S = g_0·∏ g_i^{mn−1}` with `c` terms `g_i`. With
//! `φ` multiplication by `m`, `φ(G) ≅ C_n^r` and `Ker φ ≅ C_m^r`. Set aside
//! `m − 1` blocks `g_i^n` for every `i`; what remains is
//! `g_0·∏ g_i^{n−1}`, whose image under `φ` has the D0 shape over `C_n^r`,
//! so it contains a block `S_0` of length `n` with `σ(S_0) ∈ Ker φ`. The
//! block sums `σ(S_0)·∏ (n·g_i)^{m−1}` then have the D0 shape over
//! `C_m^r`, and `m` blocks whose sums cancel give a zero-sum subsequence of
//! `S` of length `mn`.

use std::collections::BTreeMap;

use crate::detect::find_zero_sum_fixed_length;
use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupSpec};
use crate::sequence::GroupSequence;

/// Supplies zero-sum witnesses for sequences of the D0 shape.
pub trait D0Oracle {
    /// Over `group = C_k^r`, returns a zero-sum subsequence of `g·T^{k−1}`
    /// of length `k`, or `None` if it cannot.
    fn witness(
        &self,
        group: &GroupSpec,
        g: &GroupElement,
        t: &GroupSequence,
    ) -> Option<GroupSequence>;
}

/// Finds witnesses with the fixed-length zero-sum DP.
#[derive(Clone, Copy, Debug, Default)]
pub struct DirectOracle;

impl D0Oracle for DirectOracle {
    fn witness(
        &self,
        group: &GroupSpec,
        g: &GroupElement,
        t: &GroupSequence,
    ) -> Option<GroupSequence> {
        let k = group.exponent();
        let mut s = t.power(k - 1);
        s.push(g.clone()).ok()?;
        find_zero_sum_fixed_length(&s, k)
    }
}

/// Builds a zero-sum subsequence of length `mn` of `g_0·T^{mn−1}` over `C_{mn}^r`.
pub fn d0_compose(
    m: u64,
    n: u64,
    g0: &GroupElement,
    t: &GroupSequence,
    oracle_m: &dyn D0Oracle,
    oracle_n: &dyn D0Oracle,
) -> Result<GroupSequence> {
    if m < 2 || n < 2 {
        return Err(Error::InvalidArgument(
            "m and n must both be at least 2".into(),
        ));
    }
    let group = t.group();
    let r = group.rank();
    let mn = m.checked_mul(n).ok_or(Error::GroupTooLarge)?;
    if group.homocyclic_params() != Some((mn, r)) {
        return Err(Error::InvalidArgument(format!(
            "sequence is over {group}, expected C_{mn}^{r}"
        )));
    }
    group.check(g0)?;
    let image_group = GroupSpec::homocyclic(n, r)?;
    let kernel_group = GroupSpec::homocyclic(m, r)?;
    // φ(x) = m·x, identified with x mod n; κ(n·y) = y mod m on the kernel
    let phi = |x: &GroupElement| -> GroupElement {
        image_group
            .element(&x.coords().iter().map(|&v| v % n).collect::<Vec<_>>())
            .expect("reduced coordinates")
    };
    let kappa = |x: &GroupElement| -> GroupElement {
        debug_assert!(x.coords().iter().all(|&v| v % n == 0));
        kernel_group
            .element(&x.coords().iter().map(|&v| v / n).collect::<Vec<_>>())
            .expect("kernel element")
    };

    // residual g_0·∏ g_i^{n−1}: the source terms and their images
    let mut residual: Vec<GroupElement> = vec![g0.clone()];
    for (g, k) in t.counts() {
        for _ in 0..k * (n - 1) {
            residual.push(g.clone());
        }
    }
    let image_t = GroupSequence::from_counts(&image_group, t.counts().map(|(g, k)| (phi(g), k)))?;
    let image_witness = oracle_n
        .witness(&image_group, &phi(g0), &image_t)
        .ok_or_else(|| {
            Error::OracleFailure(format!("no length-{n} zero-sum over {image_group}"))
        })?;
    let mut image_residual = image_t.power(n - 1);
    image_residual.push(phi(g0))?;
    check_witness(&image_witness, &image_residual, n, "image")?;
    let s0 = lift(group, &image_witness, &residual, phi)?;
    let s0_sum = s0.sum().clone();

    // kernel sequence κ(σ(S_0))·∏ κ(n·g_i)^{m−1}
    let h = kappa(&s0_sum);
    let kernel_t = GroupSequence::from_counts(
        &kernel_group,
        t.counts()
            .map(|(g, k)| (kappa(&group.scale(n as i64, g).expect("valid term")), k)),
    )?;
    let kernel_witness = oracle_m
        .witness(&kernel_group, &h, &kernel_t)
        .ok_or_else(|| {
            Error::OracleFailure(format!("no length-{m} zero-sum over {kernel_group}"))
        })?;
    let mut kernel_seq = kernel_t.power(m - 1);
    kernel_seq.push(h.clone())?;
    check_witness(&kernel_witness, &kernel_seq, m, "kernel")?;

    // assign picked kernel terms to blocks: S_0 first, then the g_i^n blocks
    let mut out = GroupSequence::empty(group);
    let mut wanted: BTreeMap<GroupElement, u64> = kernel_witness
        .counts()
        .map(|(e, k)| (e.clone(), k))
        .collect();
    if let Some(k) = wanted.get_mut(&h) {
        if *k > 0 {
            *k -= 1;
            out = out.concat(&s0)?;
        }
    }
    for (g, mult) in t.counts() {
        let key = kappa(&group.scale(n as i64, g)?);
        let Some(k) = wanted.get_mut(&key) else {
            continue;
        };
        let take = (*k).min(mult * (m - 1));
        *k -= take;
        out.push_n(g.clone(), take * n)?;
    }
    assert!(
        wanted.values().all(|&k| k == 0),
        "kernel witness terms left unassigned"
    );

    let mut source = t.power(mn - 1);
    source.push(g0.clone())?;
    assert_eq!(out.len(), mn, "composed subsequence has the wrong length");
    assert!(
        out.is_zero_sum(),
        "composed subsequence does not sum to zero"
    );
    assert!(
        out.is_subsequence_of(&source),
        "composed subsequence is not part of the input"
    );
    Ok(out)
}

fn check_witness(w: &GroupSequence, of: &GroupSequence, len: u64, level: &str) -> Result<()> {
    if w.len() == len && w.is_zero_sum() && w.is_subsequence_of(of) {
        Ok(())
    } else {
        Err(Error::OracleFailure(format!(
            "{level} oracle returned an invalid witness {w}"
        )))
    }
}

/// Picks terms of `source` whose images make up `witness`.
fn lift(
    group: &GroupSpec,
    witness: &GroupSequence,
    source: &[GroupElement],
    map: impl Fn(&GroupElement) -> GroupElement,
) -> Result<GroupSequence> {
    let mut need: BTreeMap<GroupElement, u64> =
        witness.counts().map(|(e, k)| (e.clone(), k)).collect();
    let mut picked = Vec::new();
    for x in source {
        if let Some(k) = need.get_mut(&map(x)) {
            if *k > 0 {
                *k -= 1;
                picked.push(x);
            }
        }
    }
    if need.values().any(|&k| k > 0) {
        return Err(Error::OracleFailure(
            "witness is not an image of the residual".into(),
        ));
    }
    GroupSequence::from_elements(group, picked)
}
