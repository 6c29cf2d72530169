use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::rngs::StdRng;
use rand::SeedableRng;

use cprop::algorithms::{hyper_arc, pc2};
use cprop::batch;
use cprop::gen::{random_csp, random_normalized, CspParams};

fn corpus(size: usize) -> (Vec<cprop::Csp>, Vec<cprop::NormalizedCsp>) {
    let mut rng = StdRng::seed_from_u64(7);
    let params = CspParams {
        variables: 4..=6,
        domain_size: 3..=5,
        ..CspParams::default()
    };
    let plain = (0..size).map(|_| random_csp(&mut rng, &params)).collect();
    let normalized = (0..size).map(|_| random_normalized(&mut rng, &params)).collect();
    (plain, normalized)
}

fn bench(c: &mut Criterion) {
    let (plain, normalized) = corpus(256);
    let mut group = c.benchmark_group("corpus");
    group.bench_function(BenchmarkId::new("hyper_arc", "sequential"), |b| {
        b.iter(|| batch::map_sequential(&plain, |p| hyper_arc(p).unwrap().trace.len()))
    });
    group.bench_function(BenchmarkId::new("hyper_arc", "parallel"), |b| {
        b.iter(|| batch::map(&plain, |p| hyper_arc(p).unwrap().trace.len()))
    });
    group.bench_function(BenchmarkId::new("pc2", "sequential"), |b| {
        b.iter(|| batch::map_sequential(&normalized, |p| pc2(p).unwrap().trace.len()))
    });
    group.bench_function(BenchmarkId::new("pc2", "parallel"), |b| {
        b.iter(|| batch::map(&normalized, |p| pc2(p).unwrap().trace.len()))
    });
    group.finish();
}

criterion_group!(benches, bench);
criterion_main!(benches);
