use criterion::{criterion_group, criterion_main, Criterion};
use ptzeno::{
    eig2, floquet_spectrum, locate_features, monodromy_numeric, omega_sweep, phase_diagram,
    propagate, StateVec, SystemParams,
};
use ptzeno_bench::fig2_point;
use std::hint::black_box;

fn bench_spectrum_point(c: &mut Criterion) {
    let (sys, drive) = fig2_point();
    c.bench_function("floquet_spectrum/point", |b| {
        b.iter(|| floquet_spectrum(black_box(&sys), black_box(&drive)))
    });
    c.bench_function("monodromy_numeric+eig2/point", |b| {
        b.iter(|| eig2(&monodromy_numeric(black_box(&sys), black_box(&drive), true)).unwrap())
    });
}

fn bench_sweep(c: &mut Criterion) {
    let sys = SystemParams::new(1.0).unwrap();
    c.bench_function("omega_sweep/512", |b| {
        b.iter(|| omega_sweep(black_box(&sys), 200.0, 0.01, (0.45, 4.0), 512).unwrap())
    });
    c.bench_function("locate_features/512", |b| {
        let sweep = omega_sweep(&sys, 200.0, 0.01, (0.45, 4.0), 512).unwrap();
        b.iter(|| locate_features(black_box(&sweep)))
    });
}

fn bench_phase_diagram(c: &mut Criterion) {
    let sys = SystemParams::new(1.0).unwrap();
    c.bench_function("phase_diagram/64x64", |b| {
        b.iter(|| phase_diagram(black_box(&sys), 0.01, (0.0, 250.0), (0.45, 4.0), (64, 64)).unwrap())
    });
}

fn bench_propagate(c: &mut Criterion) {
    let (sys, drive) = fig2_point();
    c.bench_function("propagate/100periods", |b| {
        b.iter(|| propagate(black_box(&sys), black_box(&drive), StateVec::UP, 100, 16).unwrap())
    });
}

criterion_group!(
    benches,
    bench_spectrum_point,
    bench_sweep,
    bench_phase_diagram,
    bench_propagate
);
criterion_main!(benches);
