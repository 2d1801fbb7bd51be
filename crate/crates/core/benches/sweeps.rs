use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use bproof_core::selftest::{binder_laws, correct_lift, decider_checks, prop_sweep, Execution, Universe};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn laws(c: &mut Criterion) {
    let u = Universe::new(2);
    let mut g = c.benchmark_group("binder_laws_depth2");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| binder_laws(&u, exec, correct_lift))
        });
    }
    g.finish();
}

fn deciders(c: &mut Criterion) {
    let u = Universe::new(2);
    let mut g = c.benchmark_group("deciders_depth2");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| decider_checks(&u, exec))
        });
    }
    g.finish();
}

fn props(c: &mut Criterion) {
    let mut g = c.benchmark_group("prop_sweep_depth3");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| prop_sweep(3, exec))
        });
    }
    g.finish();
}

criterion_group!(benches, laws, deciders, props);
criterion_main!(benches);
