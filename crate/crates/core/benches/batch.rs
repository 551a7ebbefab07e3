use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wallcross::batch;
use wallcross::kgit::{full_report, WallModel};
use wallcross::selfcheck::random_weights;

fn models(count: usize) -> Vec<WallModel> {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    (0..count)
        .map(|_| {
            let w = random_weights(&mut rng);
            WallModel::new(w, rng.random_range(-3..=3)).unwrap()
        })
        .collect()
}

fn bench_reports(c: &mut Criterion) {
    let mut group = c.benchmark_group("full_report batch");
    group.sample_size(10);
    for count in [32usize, 256] {
        let input = models(count);
        group.bench_with_input(BenchmarkId::new("sequential", count), &input, |b, ms| {
            b.iter(|| batch::map_sequential(ms, full_report))
        });
        #[cfg(feature = "parallel")]
        group.bench_with_input(BenchmarkId::new("parallel", count), &input, |b, ms| {
            b.iter(|| batch::map_parallel(ms, full_report))
        });
    }
    group.finish();
}

fn bench_single(c: &mut Criterion) {
    let p1 = WallModel::new(vec![1, 1, -2], -1).unwrap();
    let wide = WallModel::new(vec![4, 4, 4, 4, -4, -4, -4, -4], 0).unwrap();
    c.bench_function("full_report local_p1", |b| b.iter(|| full_report(&p1)));
    c.bench_function("full_report eta=16", |b| b.iter(|| full_report(&wide)));
}

criterion_group!(benches, bench_reports, bench_single);
criterion_main!(benches);
