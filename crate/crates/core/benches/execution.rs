use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use hypercone::crosssec::{circle_spectrum, circle_spectrum_exact, Mode};
use hypercone::exact::{rational, rational_int};
use hypercone::quadrature::QuadratureControl;
use hypercone::resolvent::{residual_check_with, RadialProfile};
use hypercone::resonance::{enumerate_resonances_with, SpectralParam};
use hypercone::verify::{residual_grid, residue_battery};
use hypercone::{Execution, C64};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn bench_enumeration(c: &mut Criterion) {
    let mut group = c.benchmark_group("enumerate");
    let exact = circle_spectrum_exact(&rational(7, 3), 2000).unwrap();
    let float = circle_spectrum(std::f64::consts::PI, 2000).unwrap();
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new("circle_exact_7/3", name), &exec, |b, &exec| {
            b.iter(|| enumerate_resonances_with(black_box(&exact), 200, 200.0, exec).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("circle_float_pi", name), &exec, |b, &exec| {
            b.iter(|| enumerate_resonances_with(black_box(&float), 200, 200.0, exec).unwrap())
        });
    }
    group.finish();
}

fn bench_residual(c: &mut Criterion) {
    let mut group = c.benchmark_group("residual_grid");
    group.sample_size(10);
    let f = RadialProfile::bump(0.3, 0.6).unwrap();
    let grid = residual_grid(&f);
    let mode = Mode::exact(rational_int(2), 1, 0).unwrap();
    let lambda = SpectralParam::new(C64::new(1.0, -0.7));
    let qc = QuadratureControl::new(1e-14, 1e-14, 200).unwrap();
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| residual_check_with(2, &mode, &lambda, &f, &grid, &qc, exec).unwrap())
        });
    }
    group.finish();
}

fn bench_residue(c: &mut Criterion) {
    let mut group = c.benchmark_group("residue_battery");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| residue_battery(7, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_enumeration, bench_residual, bench_residue);
criterion_main!(benches);
