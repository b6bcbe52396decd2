use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use padic_entropy::fixcount::{det_bareiss, det_crt};
use padic_entropy::{det_exact, tr_log_one_unit, Law};
use padic_entropy_bench::{int_matrix, laurent_pair, one_unit};
use std::hint::black_box;

fn determinants(c: &mut Criterion) {
    let mut g = c.benchmark_group("det");
    for n in [16usize, 48, 96] {
        let m = int_matrix(n, 20, n as u64);
        g.bench_with_input(BenchmarkId::new("exact", n), &m, |b, m| b.iter(|| det_exact(black_box(m))));
        g.bench_with_input(BenchmarkId::new("bareiss", n), &m, |b, m| b.iter(|| det_bareiss(black_box(m))));
        g.bench_with_input(BenchmarkId::new("crt", n), &m, |b, m| b.iter(|| det_crt(black_box(m))));
    }
    g.finish();
}

fn trace_log(c: &mut Criterion) {
    let mut g = c.benchmark_group("tr_log");
    g.sample_size(20);
    for (name, law) in [("Z", Law::abelian(1)), ("Z2", Law::abelian(2)), ("H", Law::Heisenberg)] {
        let f = one_unit(law, 3, 7);
        for prec in [8u32, 16] {
            g.bench_function(BenchmarkId::new(name, prec), |b| b.iter(|| tr_log_one_unit(black_box(&f), 3, prec).unwrap()));
        }
    }
    g.finish();
}

fn laurent_mul(c: &mut Criterion) {
    let mut g = c.benchmark_group("laurent_mul");
    for (name, law) in [("Z2", Law::abelian(2)), ("H", Law::Heisenberg)] {
        for terms in [8usize, 32] {
            let (a, b) = laurent_pair(law, terms, terms as u64);
            g.bench_function(BenchmarkId::new(name, terms), |bn| bn.iter(|| black_box(&a).try_mul(black_box(&b)).unwrap()));
        }
    }
    g.finish();
}

criterion_group!(benches, determinants, trace_log, laurent_mul);
criterion_main!(benches);
