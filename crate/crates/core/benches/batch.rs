//! Batch entry points against plain sequential loops.
//!
//! With default features the batch side runs on rayon; build with
//! `--no-default-features` to time the sequential fallback of the same API.

use std::hint::black_box;
use std::time::Duration;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use itinerary_lab::address_space::{admissible_words, critical_itineraries, is_admissible};
use itinerary_lab::map_model::MapSystem;
use itinerary_lab::projection::{Homeomorphism, HOMEO_DEPTH};
use itinerary_lab::symbolic::{Word, DEFAULT_EPS_AMB};
use itinerary_lab::symmetry::{defect_scan, symmetry_defect};

fn system() -> MapSystem<f64> {
    MapSystem::affine(0.7, 0.55, 0.618_348_312_843_590_9).unwrap()
}

fn homeo(c: &mut Criterion) {
    let h = Homeomorphism::new(system(), HOMEO_DEPTH, 1e-12);
    let mut group = c.benchmark_group("homeo");
    for n in [256usize, 4096] {
        let xs: Vec<f64> = (0..n).map(|i| i as f64 / (n - 1) as f64).collect();
        group.bench_with_input(BenchmarkId::new("batch", n), &xs, |b, xs| {
            b.iter(|| h.eval_many(black_box(xs)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("sequential", n), &xs, |b, xs| {
            b.iter(|| xs.iter().map(|x| h.eval(black_box(x)).unwrap()).collect::<Vec<_>>())
        });
    }
    group.finish();
}

fn admissibility(c: &mut Criterion) {
    let crit = critical_itineraries(&system(), 20, DEFAULT_EPS_AMB);
    let mut group = c.benchmark_group("admissible_words");
    for k in [12usize, 16] {
        group.bench_with_input(BenchmarkId::new("batch", k), &k, |b, &k| {
            b.iter(|| admissible_words(black_box(k), &crit).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("sequential", k), &k, |b, &k| {
            b.iter(|| {
                (0..1u64 << k)
                    .map(|i| Word::from_bits(i, k))
                    .filter(|w| is_admissible(w, &crit).unwrap())
                    .collect::<Vec<_>>()
            })
        });
    }
    group.finish();
}

fn defects(c: &mut Criterion) {
    let sys = system();
    let grid: Vec<f64> = (0..200).map(|i| 0.45 + 0.25 * i as f64 / 199.0).collect();
    let mut group = c.benchmark_group("defect_scan");
    group.bench_function("batch", |b| {
        b.iter(|| defect_scan(&sys, black_box(&grid), 48, DEFAULT_EPS_AMB).unwrap())
    });
    group.bench_function("sequential", |b| {
        b.iter(|| {
            grid.iter()
                .map(|rho| symmetry_defect(&sys, black_box(rho), 48, DEFAULT_EPS_AMB).unwrap())
                .collect::<Vec<_>>()
        })
    });
    group.finish();
}

criterion_group! {
    name = batch;
    config = Criterion::default().sample_size(20).measurement_time(Duration::from_secs(3));
    targets = homeo, admissibility, defects
}
criterion_main!(batch);
