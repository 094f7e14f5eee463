use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use zerosum_bench::{group, random_sequences};
use zerosum_core::{has_nonempty_zero_sum, has_zero_sum_fixed_length};

fn fixed_length(c: &mut Criterion) {
    let mut g = c.benchmark_group("fixed_length_dp");
    for (factors, len) in [
        (&[5u64, 5, 5][..], 36usize),
        (&[3, 3, 3, 3], 40),
        (&[12, 12], 40),
    ] {
        let grp = group(factors);
        let seqs = random_sequences(&grp, len, 64, 1);
        let exp = grp.exponent();
        g.bench_function(format!("{grp} len {len}"), |b| {
            b.iter(|| {
                seqs.iter()
                    .filter(|s| has_zero_sum_fixed_length(black_box(s), exp))
                    .count()
            })
        });
    }
    g.finish();
}

fn nonempty(c: &mut Criterion) {
    let grp = group(&[2, 2, 2, 2, 4]);
    let seqs = random_sequences(&grp, 7, 256, 2);
    c.bench_function("nonempty_zero_sum C_2^4+C_4 len 7", |b| {
        b.iter(|| {
            seqs.iter()
                .filter(|s| has_nonempty_zero_sum(black_box(s)))
                .count()
        })
    });
}

criterion_group!(benches, fixed_length, nonempty);
criterion_main!(benches);
