use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use hilb2_core::betti::betti_hilb2_exact;
use hilb2_core::gf2::rank;
use hilb2_core::kernel::kernel_dimensions;
use hilb2_core::{catalog_get, F2Matrix, Mode};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_matrix(size: usize, seed: u64) -> F2Matrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = F2Matrix::zeros(size, size);
    for r in 0..size {
        for c in 0..size {
            m.set(r, c, rng.gen_bool(0.5));
        }
    }
    m
}

fn pipeline(c: &mut Criterion) {
    for name in ["k3", "enriques_x", "p3"] {
        let d = catalog_get(name).unwrap();
        c.bench_function(&format!("kernel_dimensions/{name}"), |b| {
            b.iter(|| kernel_dimensions(black_box(&d), Mode::All))
        });
        c.bench_function(&format!("hilb2_exact/{name}"), |b| {
            b.iter(|| betti_hilb2_exact(black_box(&d)).unwrap())
        });
    }
}

fn elimination(c: &mut Criterion) {
    for size in [64, 256] {
        let m = random_matrix(size, 7);
        c.bench_function(&format!("rank/{size}x{size}"), |b| {
            b.iter(|| rank(black_box(&m)))
        });
    }
}

criterion_group!(benches, pipeline, elimination);
criterion_main!(benches);
