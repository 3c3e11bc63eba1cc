use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use mintime_bench::{sample_cone_rows, sample_lp, sample_scenes};
use mintime_core::geometry::dd::cone_generators;
use mintime_core::mintime::minimal_time_exact;
use mintime_core::verify::formula_subdiffs;

fn lp(c: &mut Criterion) {
    for n in [3, 6] {
        let lp = sample_lp(n);
        c.bench_function(&format!("lp/exact-simplex-{n}"), |b| b.iter(|| black_box(lp.solve())));
    }
}

fn minimal_time(c: &mut Criterion) {
    let scenes = sample_scenes();
    c.bench_function("minimal_time/exact", |b| {
        b.iter(|| {
            for s in &scenes {
                let omega = s.polyhedral().expect("polyhedral");
                for x in &s.points {
                    black_box(minimal_time_exact(&s.dynamics, omega, x).ok());
                }
            }
        })
    });
}

fn double_description(c: &mut Criterion) {
    for (n, m) in [(3, 6), (4, 8)] {
        let rows = sample_cone_rows(n, m);
        c.bench_function(&format!("dd/cone-generators-{n}x{m}"), |b| {
            b.iter(|| black_box(cone_generators(n, &rows)))
        });
    }
}

fn subdiff(c: &mut Criterion) {
    let scenes = sample_scenes();
    c.bench_function("subdiff/formula-sets", |b| {
        b.iter(|| {
            for s in &scenes {
                for x in &s.points {
                    black_box(formula_subdiffs(s, x).ok());
                }
            }
        })
    });
}

criterion_group!(kernels, lp, minimal_time, double_description, subdiff);
criterion_main!(kernels);
