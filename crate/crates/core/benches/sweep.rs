use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qdslow::parallel::Execution;
use qdslow::scenario::{builtin_scenario, logspace, run_scenario, Sweep};

fn intensity_sweep(c: &mut Criterion) {
    let mut s = builtin_scenario("fig3").unwrap();
    s.sweep = Sweep::Intensity { intensities_w_cm2: logspace(1e-2, 1e10, 25) };
    let mut group = c.benchmark_group("fig3_sweep");
    group.sample_size(10);
    for (name, exec) in [("parallel", Execution::Auto), ("sequential", Execution::Sequential)] {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| run_scenario(&s, exec).unwrap())
        });
    }
    group.finish();
}

fn spectrum_sweep(c: &mut Criterion) {
    let s = builtin_scenario("fig7").unwrap();
    let mut group = c.benchmark_group("fig7_spectrum");
    group.sample_size(10);
    for (name, exec) in [("parallel", Execution::Auto), ("sequential", Execution::Sequential)] {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| run_scenario(&s, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, intensity_sweep, spectrum_sweep);
criterion_main!(benches);
