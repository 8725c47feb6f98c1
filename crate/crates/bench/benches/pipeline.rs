use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use rydberg_np::layout::transpile_oracle;
use rydberg_np::oracle::{build_oracle, OracleOptions};
use rydberg_np::schedule::validate_schedule;
use rydberg_np::sim::{optimal_iterations, GroverRun};
use rydberg_np_bench::sat_system;

fn pipeline(c: &mut Criterion) {
    let mut g = c.benchmark_group("oracle");
    for n in [8, 16, 32] {
        let sys = sat_system(n, 1);
        g.bench_with_input(BenchmarkId::new("build", n), &sys, |b, s| {
            b.iter(|| build_oracle(black_box(s), OracleOptions::default()))
        });
        g.bench_with_input(BenchmarkId::new("transpile", n), &sys, |b, s| {
            b.iter(|| transpile_oracle(black_box(s), OracleOptions::default()).unwrap())
        });
        let sched = transpile_oracle(&sys, OracleOptions::default()).unwrap();
        g.bench_with_input(BenchmarkId::new("validate", n), &sched, |b, s| b.iter(|| validate_schedule(black_box(s))));
    }
    g.finish();

    let sys = sat_system(8, 2);
    let k = optimal_iterations(8, 1);
    c.bench_function("grover/simulate_8", |b| {
        b.iter(|| GroverRun::simulate(black_box(&sys), k, OracleOptions::default(), 64).unwrap())
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = pipeline
}
criterion_main!(benches);
