use std::f64::consts::PI;
use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use d4lab_core::analysis::{curve_directions, oracle_regions, ScanOptions};
use d4lab_core::{classify_configuration, Branch, ChartPoint, ClassificationInput, DirectionKind, Sheet, Sign, UnfoldingSpec};

fn spec(epsilon1: Sign) -> UnfoldingSpec {
    UnfoldingSpec::canonical(epsilon1)
        .with(1, 0, 0, 2, 1.0)
        .with(2, 0, 0, 2, 1.0)
        .with(2, 1, 0, 0, 0.4)
        .with(3, 1, 0, 0, -0.3)
        .with(1, 2, 0, 0, 0.5)
        .with(2, 1, 1, 0, -0.7)
        .with(3, 0, 2, 1, 0.2)
        .with(1, 1, 1, 1, 0.6)
}

fn bench_sample(c: &mut Criterion) {
    let mut group = c.benchmark_group("sample");
    for e1 in [Sign::Minus, Sign::Plus] {
        let sheet = Sheet::new(&spec(e1), Branch::new(e1, Sign::Plus)).unwrap();
        let p = ChartPoint::new(0.4, 0.05);
        group.bench_with_input(BenchmarkId::new("point", e1), &p, |b, p| {
            b.iter(|| sheet.sample(black_box(*p), None).unwrap())
        });
        let guess = sheet.solve(p, None).map(|s| [s.x, s.y]).unwrap();
        group.bench_with_input(BenchmarkId::new("warm_start", e1), &p, |b, p| {
            b.iter(|| sheet.sample(black_box(*p), Some(guess)).unwrap())
        });
    }
    group.finish();
}

fn bench_grid(c: &mut Criterion) {
    let sheet = Sheet::new(&spec(Sign::Minus), Branch::new(Sign::Minus, Sign::Plus)).unwrap();
    c.bench_function("grid_64x16", |b| {
        b.iter(|| {
            let mut count = 0;
            for i in 0..64 {
                let theta = 2.0 * PI * i as f64 / 64.0;
                for j in 0..16 {
                    let z = -0.1 + 0.2 * j as f64 / 15.0;
                    count += sheet.sample(ChartPoint::new(theta, z), None).is_ok() as usize;
                }
            }
            count
        })
    });
}

fn bench_directions(c: &mut Criterion) {
    let mut group = c.benchmark_group("curve_directions");
    group.sample_size(20);
    for e1 in [Sign::Minus, Sign::Plus] {
        let s = spec(e1);
        group.bench_function(BenchmarkId::from_parameter(e1), |b| {
            b.iter(|| curve_directions(&s, Branch::new(e1, Sign::Plus), &DirectionKind::CURVES, &ScanOptions::default()))
        });
    }
    group.finish();
}

fn bench_classify(c: &mut Criterion) {
    let input = ClassificationInput::new(1.0, 1.0, 1.0, Sign::Minus);
    c.bench_function("classify_configuration", |b| b.iter(|| classify_configuration(black_box(&input))));
    c.bench_function("oracle_regions", |b| b.iter(|| oracle_regions(black_box(&input))));
}

criterion_group!(benches, bench_sample, bench_grid, bench_directions, bench_classify);
criterion_main!(benches);
