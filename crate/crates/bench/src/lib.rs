//! Seeded inputs shared by the benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use zerosum_core::{GroupSequence, GroupSpec};

pub fn group(factors: &[u64]) -> GroupSpec {
    GroupSpec::new(factors).expect("valid invariant factors")
}

/// `count` random sequences of length `len` over `group`.
pub fn random_sequences(
    group: &GroupSpec,
    len: usize,
    count: usize,
    seed: u64,
) -> Vec<GroupSequence> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let terms: Vec<_> = (0..len)
                .map(|_| {
                    let c: Vec<u64> = group
                        .factors()
                        .iter()
                        .map(|&m| rng.gen_range(0..m))
                        .collect();
                    group.element(&c).expect("coordinates in range")
                })
                .collect();
            GroupSequence::from_elements(group, &terms).expect("elements of the group")
        })
        .collect()
}
