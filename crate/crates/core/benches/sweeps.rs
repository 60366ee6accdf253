use adlv_core::adlv::Adlv;
use adlv_core::par::Execution;
use adlv_core::sweep::{self, Check, SweepOptions};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

// Each iteration builds a fresh `Adlv` so the memo tables start empty.
fn run(ty: &str, check: Check, opts: &SweepOptions) {
    let a = Adlv::build(ty, "").unwrap();
    let r = sweep::run(&a, check, opts).unwrap();
    assert_eq!(r.violations, 0);
}

fn sweeps(c: &mut Criterion) {
    let mut group = c.benchmark_group("sweep");
    group.sample_size(10);
    for (ty, check, max_length) in [("A2", Check::Ghkr, 8), ("C2", Check::UpperBound, 8), ("A2", Check::Tables, 8)] {
        for exec in [Execution::Sequential, Execution::Parallel] {
            let opts = SweepOptions {
                max_length,
                exec,
                ..SweepOptions::default()
            };
            let id = BenchmarkId::new(format!("{ty}/{}", check.name()), format!("{exec:?}"));
            group.bench_with_input(id, &opts, |b, opts| b.iter(|| run(ty, check, opts)));
        }
    }
    group.finish();
}

fn straight_classes(c: &mut Criterion) {
    let mut group = c.benchmark_group("straight-classes");
    group.sample_size(10);
    for exec in [Execution::Sequential, Execution::Parallel] {
        group.bench_function(format!("C2/{exec:?}"), |b| {
            b.iter(|| {
                let a = Adlv::build("C2", "").unwrap();
                a.twisted_group().enumerate_straight_classes_with(8, exec).unwrap()
            })
        });
    }
    group.finish();
}

criterion_group!(benches, sweeps, straight_classes);
criterion_main!(benches);
