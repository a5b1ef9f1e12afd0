use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use std::hint::black_box;

use upqi_core::imaging::{scan_object, ObjectMap, Protocol, Sampling};
use upqi_core::{
    bogoliubov_coeffs, fock_moments, moment_result, oracle_chain, sample_homodyne,
    FieldParams, MeasurementSetting, ObjectPixel, SetupParams, SqueezerParams,
};

fn std_setup(alpha: f64) -> SetupParams {
    SetupParams::new(
        SqueezerParams::new(0.5, 0.0).unwrap(),
        SqueezerParams::new(0.5, 0.3).unwrap(),
        FieldParams::new(alpha, 0.2, 1.0, -0.4).unwrap(),
    )
}

fn bench_closed_forms(c: &mut Criterion) {
    let setup = std_setup(1.0);
    let pixel = ObjectPixel::new(0.7, 0.9, 0.0).unwrap();
    let setting = MeasurementSetting::from_setup(&setup);
    c.bench_function("closed_form_moments", |b| {
        b.iter(|| {
            let coeffs = bogoliubov_coeffs(black_box(&setup), black_box(&pixel));
            moment_result(&coeffs, &setup.field, &setting)
        })
    });
    c.bench_function("symplectic_oracle_chain", |b| {
        b.iter(|| oracle_chain(black_box(&setup), black_box(&pixel)))
    });
}

fn bench_fock_oracle(c: &mut Criterion) {
    let setup = SetupParams::new(
        SqueezerParams::new(0.2, 0.0).unwrap(),
        SqueezerParams::new(0.2, 0.0).unwrap(),
        FieldParams::new(0.5, 0.0, 1.0, 0.0).unwrap(),
    );
    let pixel = ObjectPixel::new(0.8, 0.4, 0.0).unwrap();
    let mut group = c.benchmark_group("fock_oracle");
    group.sample_size(10);
    group.bench_function("cutoff_20", |b| {
        b.iter(|| fock_moments(black_box(&setup), black_box(&pixel), 20).unwrap())
    });
    group.finish();
}

fn bench_sampler(c: &mut Criterion) {
    c.bench_function("sample_homodyne_100k", |b| {
        b.iter_batched(
            || (),
            |()| sample_homodyne(2.9, 3.4, 100_000, black_box(7)).unwrap(),
            BatchSize::SmallInput,
        )
    });
}

fn bench_scan(c: &mut Criterion) {
    let setup = std_setup(0.0);
    let map = ObjectMap::test_pattern(8, 8).unwrap();
    let mut group = c.benchmark_group("scan");
    group.sample_size(10);
    group.bench_function("qfi_8x8_n1000", |b| {
        b.iter(|| {
            scan_object(
                black_box(&setup),
                black_box(&map),
                Protocol::Qfi,
                Sampling::Draws(1000),
                5,
            )
            .unwrap()
        })
    });
    group.finish();
}

criterion_group!(
    benches,
    bench_closed_forms,
    bench_fock_oracle,
    bench_sampler,
    bench_scan
);
criterion_main!(benches);
