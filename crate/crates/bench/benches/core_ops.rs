use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use num_rational::BigRational;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tschur_core::edge::{airy_kernel, tw2_cdf};
use tschur_core::kernel::{symbol, SymbolParams};
use tschur_core::montecarlo::{t_ascent_length, MarkedPermutation};
use tschur_core::partition::Partition;
use tschur_core::rsk::{rsk, AMatrix, Entry};
use tschur_core::symfunc::{t_schur, PowerSumSpec};

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn bench_t_schur(c: &mut Criterion) {
    let xs = vec![q(1, 2), q(1, 3), q(2, 7)];
    let spec = PowerSumSpec::from_variables(&xs, 12);
    let t = q(-1, 1);
    let lambda = Partition::new(vec![4, 3, 2, 1]).unwrap();
    c.bench_function("t_schur (4,3,2,1) three variables", |b| {
        b.iter(|| t_schur(black_box(&spec), &t, &lambda).unwrap())
    });
}

fn bench_rsk(c: &mut Criterion) {
    let rows = (0..6)
        .map(|i| {
            (0..6)
                .map(|j| {
                    let v = ((i * 7 + j * 3) % 4) as u32;
                    Entry::new(v, v > 0 && (i + j) % 3 == 0)
                })
                .collect()
        })
        .collect();
    let a = AMatrix::new(rows).unwrap();
    c.bench_function("rsk 6x6", |b| b.iter(|| rsk(black_box(&a))));
}

fn bench_kernel(c: &mut Criterion) {
    let sym = symbol(&SymbolParams::plancherel(3.0, 3.0, -1.0), 128).unwrap();
    c.bench_function("kernel_entry plancherel window 128", |b| {
        b.iter(|| sym.kernel_entry(black_box(5), black_box(-3)).unwrap())
    });
}

fn bench_edge(c: &mut Criterion) {
    c.bench_function("airy_kernel", |b| b.iter(|| airy_kernel(black_box(0.3), black_box(-1.2)).unwrap()));
    c.bench_function("tw2_cdf q=40", |b| b.iter(|| tw2_cdf(black_box(-1.8), 40).unwrap()));
}

fn bench_ascent(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mp = MarkedPermutation::random(1000, -1.0, &mut rng).unwrap();
    c.bench_function("t_ascent_length n=1000", |b| b.iter(|| t_ascent_length(black_box(&mp)).unwrap()));
}

criterion_group!(benches, bench_t_schur, bench_rsk, bench_kernel, bench_edge, bench_ascent);
criterion_main!(benches);
