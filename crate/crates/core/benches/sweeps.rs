use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use nbhd_core::lab::{decide_valid_with, DecideOptions, LogicClass};
use nbhd_core::par::Exec;
use nbhd_core::selftest;
use nbhd_core::syntax::parse;

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn duality(c: &mut Criterion) {
    let mut g = c.benchmark_group("duality");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::new("jbar_all_tables", name), &exec, |b, &e| {
            b.iter(|| black_box(selftest::representation_jbar(e).passed))
        });
        g.bench_with_input(BenchmarkId::new("property_transfer_10k", name), &exec, |b, &e| {
            b.iter(|| black_box(selftest::property_transfer(e, 10_000).passed))
        });
    }
    g.finish();
}

fn frame_sweeps(c: &mut Criterion) {
    let mut g = c.benchmark_group("frame_sweeps");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::new("class_separation_m3", name), &exec, |b, &e| {
            b.iter(|| black_box(selftest::class_separation(e, 3).passed))
        });
        g.bench_with_input(BenchmarkId::new("omega_bf_contrast", name), &exec, |b, &e| {
            b.iter(|| black_box(selftest::omega_barcan(e).passed))
        });
    }
    g.finish();
}

fn decision(c: &mut Criterion) {
    let corpus: Vec<_> = selftest::CORPUS.iter().map(|s| parse(s).unwrap()).collect();
    let wide = parse("([]a & []b & [](a & b)) -> [](a | c)").unwrap();
    let mut g = c.benchmark_group("decide");
    g.sample_size(10);
    for (name, exec) in MODES {
        let opts = DecideOptions { exec, ..DecideOptions::default() };
        g.bench_with_input(BenchmarkId::new("corpus_all_classes", name), &opts, |b, o| {
            b.iter(|| {
                for f in &corpus {
                    for l in LogicClass::all() {
                        black_box(decide_valid_with(f, l, o).unwrap());
                    }
                }
            })
        });
        let wide_opts = DecideOptions { limit: 7, ..opts };
        g.bench_with_input(BenchmarkId::new("basis_7", name), &wide_opts, |b, o| {
            b.iter(|| black_box(decide_valid_with(&wide, LogicClass::default(), o).unwrap()))
        });
    }
    g.finish();
}

criterion_group!(benches, duality, frame_sweeps, decision);
criterion_main!(benches);
