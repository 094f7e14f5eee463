use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use zerosum_bench::{group, random_sequences};
use zerosum_core::canonical_form;

fn canonical(c: &mut Criterion) {
    let mut g = c.benchmark_group("canonical_form");
    for (factors, len) in [
        (&[3u64, 3, 3][..], 12usize),
        (&[5, 5], 12),
        (&[2, 2, 2, 2], 10),
    ] {
        let grp = group(factors);
        let seqs = random_sequences(&grp, len, 32, 3);
        g.bench_function(format!("{grp} len {len}"), |b| {
            b.iter(|| {
                for s in &seqs {
                    black_box(canonical_form(&grp, s).expect("supported group"));
                }
            })
        });
    }
    g.finish();
}

criterion_group!(benches, canonical);
criterion_main!(benches);
