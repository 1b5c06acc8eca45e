use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use xychain::ed::{build_full_hamiltonian, thermal_state_with};
use xychain::sweep::run_sweep;
use xychain::{ChainSpec, Engine, Execution, PairSelector, SweepMode, SweepRequest, VaryRange};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn temperature_sweep(c: &mut Criterion) {
    let req = SweepRequest {
        mode: SweepMode::Temperature,
        base: ChainSpec::zero_field(101, 1.5, 0.0).unwrap(),
        range: Some(VaryRange::log(0.05, 50.0, 200)),
        pairs: PairSelector::NearestNeighbors,
        engine: Engine::Fastpath,
    };
    let mut group = c.benchmark_group("tau_sweep_n101");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| run_sweep(black_box(&req), exec).unwrap())
        });
    }
    group.finish();
}

fn delta_sweep(c: &mut Criterion) {
    // every point rebuilds its spectrum, unlike the tau sweep
    let req = SweepRequest {
        mode: SweepMode::Delta,
        base: ChainSpec::zero_field(55, 1.0, 30.0).unwrap(),
        range: Some(VaryRange::log(0.1, 10.0, 200)),
        pairs: PairSelector::Explicit(2, 3),
        engine: Engine::Fastpath,
    };
    let mut group = c.benchmark_group("delta_sweep_n55");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| run_sweep(black_box(&req), exec).unwrap())
        });
    }
    group.finish();
}

fn oracle_thermal_state(c: &mut Criterion) {
    let mut group = c.benchmark_group("ed_thermal_state");
    group.sample_size(10);
    for n in [9, 11] {
        let h = build_full_hamiltonian(&ChainSpec::zero_field(n, 1.5, 5.0).unwrap()).unwrap();
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, n), &exec, |b, &exec| {
                b.iter(|| thermal_state_with(black_box(&h), 5.0, exec).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, temperature_sweep, delta_sweep, oracle_thermal_state);
criterion_main!(benches);
