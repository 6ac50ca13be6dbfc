use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use oseen_bench::{perturbed_vortex, shifted_vortex};
use oseen_core::biot_savart::velocity_spectral;
use oseen_core::evolution::{ScaledSolver, SolverConfig};
use oseen_core::lyapunov::inequality_suite;
use oseen_core::spectrum::{assemble_operator, eigen_spectrum, RadialGrid, Subspace};

fn biot_savart(c: &mut Criterion) {
    let mut group = c.benchmark_group("velocity_spectral");
    for n in [128, 256] {
        let w = shifted_vortex(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &w, |b, w| b.iter(|| velocity_spectral(black_box(w))));
    }
    group.finish();
}

fn strang_step(c: &mut Criterion) {
    let w = shifted_vortex(256);
    let mut solver = ScaledSolver::new(w.grid(), &SolverConfig::default()).unwrap();
    c.bench_function("strang_step_256", |b| b.iter(|| solver.step(black_box(&w)).unwrap()));
}

fn entropy_functionals(c: &mut Criterion) {
    let w = perturbed_vortex(256, 42);
    c.bench_function("inequality_suite_256", |b| b.iter(|| inequality_suite(black_box(&w))));
}

fn spectrum(c: &mut Criterion) {
    faer::set_global_parallelism(faer::Par::Seq);
    let grid = Arc::new(RadialGrid::for_basis(80).unwrap());
    let mut group = c.benchmark_group("spectrum");
    group.sample_size(10);
    group.bench_function("assemble_n2_N80", |b| b.iter(|| assemble_operator(2, 10.0, &grid).unwrap()));
    let op = assemble_operator(2, 10.0, &grid).unwrap();
    group.bench_function("eigen_pair_n2_N80", |b| b.iter(|| eigen_spectrum(black_box(&op), Subspace::ZeroMean).unwrap()));
    group.finish();
}

criterion_group!(benches, biot_savart, strang_step, entropy_functionals, spectrum);
criterion_main!(benches);
