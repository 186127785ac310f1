use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use mhd_core::diagnostics::bmo_seminorm;
use mhd_core::dynamics::{rhs_primitive, step};
use mhd_core::scenarios::{make_ic, Scenario};
use mhd_core::{Grid, SpectralScalar, StepperConfig};
use std::hint::black_box;

fn transforms(c: &mut Criterion) {
    let mut group = c.benchmark_group("fft_round_trip");
    for (dim, n) in [(2, 64), (2, 256), (3, 32)] {
        let grid = Grid::new(dim, n).unwrap();
        let f = SpectralScalar::from_fn(&grid, |x| (x[0] + 2.0 * x[1]).sin() * x[2].cos());
        group.bench_with_input(BenchmarkId::from_parameter(format!("{dim}d-{n}")), &f, |b, f| {
            b.iter(|| SpectralScalar::from_physical(f.grid(), &black_box(f).to_physical()).unwrap())
        });
    }
    group.finish();
}

fn dynamics(c: &mut Criterion) {
    let mut group = c.benchmark_group("dynamics");
    for n in [64, 128] {
        let grid = Grid::new(2, n).unwrap();
        let state = make_ic(&Scenario::OrszagTang { beta: 1.0 }, &grid, 0).unwrap();
        let cfg = StepperConfig::new(0.1, 1e-3);
        group.bench_with_input(BenchmarkId::new("rhs", n), &state, |b, s| b.iter(|| rhs_primitive(black_box(s), 0.1)));
        group.bench_with_input(BenchmarkId::new("rk4_step", n), &state, |b, s| {
            b.iter(|| step(black_box(s), &cfg).unwrap())
        });
    }
    group.finish();
}

fn bmo(c: &mut Criterion) {
    let mut group = c.benchmark_group("bmo");
    for (dim, n) in [(2, 64), (2, 256), (3, 32)] {
        let grid = Grid::new(dim, n).unwrap();
        let f = SpectralScalar::from_fn(&grid, |x| (3.0 * x[0]).sin() + (x[1] - x[2]).cos());
        group.bench_with_input(BenchmarkId::from_parameter(format!("{dim}d-{n}")), &f, |b, f| {
            b.iter(|| bmo_seminorm(black_box(f)))
        });
    }
    group.finish();
}

criterion_group!(benches, transforms, dynamics, bmo);
criterion_main!(benches);
