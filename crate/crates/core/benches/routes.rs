use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use urd_core::par::Exec;
use urd_core::search::{catalog, solve};
use urd_core::solver::build_urd;
use urd_core::spectrum::{d, Profile};
use urd_core::verify::verify_design;

const MODES: [(&str, Exec); 2] = [
    ("sequential", Exec::Sequential),
    ("parallel", Exec::Parallel),
];

/// Verifying every certificate for one order; the batch is spread over `Exec::map`.
fn verify_batch(c: &mut Criterion) {
    let mut group = c.benchmark_group("verify_all_targets");
    for v in [48u32, 96] {
        let designs: Vec<_> = d(v)
            .unwrap()
            .iter()
            .map(|&p| build_urd(v, p).unwrap())
            .collect();
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, v), &designs, |b, designs| {
                b.iter(|| {
                    let ok = exec.map(designs.iter().collect(), |d| verify_design(d).is_valid());
                    assert!(ok.into_iter().all(|x| x));
                })
            });
        }
    }
    group.finish();
}

/// Search restarts run side by side in parallel mode.
fn search(c: &mut Criterion) {
    let mut group = c.benchmark_group("search");
    group.sample_size(10);
    let specs = [
        catalog::urd12(Profile::new(2, 0, 6)),
        catalog::urgdd_6x2(Profile::new(3, 0, 2)),
    ];
    for spec in &specs {
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, &spec.name), spec, |b, spec| {
                b.iter(|| solve(spec, exec).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, verify_batch, search);
criterion_main!(benches);
