use criterion::{black_box, criterion_group, criterion_main, Criterion};
use pairzeta::conditions::Checker;
use pairzeta::maass::eval_maass;
use pairzeta::numerics::complex_gamma;
use pairzeta::twists::{characters_mod, twist_coefficients};
use pairzeta::zeta_engine::PairEngine;
use pairzeta::C64;
use pairzeta_bench::{eisenstein_expansion, eisenstein_pair};

fn numerics(c: &mut Criterion) {
    c.bench_function("complex_gamma", |b| {
        b.iter(|| complex_gamma(black_box(C64::new(0.3, 17.0))))
    });
}

fn engine(c: &mut Criterion) {
    let spec = eisenstein_pair();
    let mut g = c.benchmark_group("engine");
    g.sample_size(10);
    g.bench_function("completed_cold", |b| {
        b.iter(|| PairEngine::new(spec.clone()).completed(1, black_box(C64::new(0.2, 7.0))))
    });
    let warm = PairEngine::new(spec.clone());
    warm.completed(1, C64::new(0.2, 7.0)).unwrap();
    g.bench_function("completed_warm", |b| {
        b.iter(|| warm.completed(1, black_box(C64::new(0.25, 7.1))))
    });
    g.bench_function("direct_sum", |b| {
        b.iter(|| warm.completed(1, black_box(C64::new(5.0, 3.0))))
    });
    g.bench_function("d3_check", |b| {
        b.iter(|| Checker::new(spec.clone()).d3(1, 1e-7))
    });
    g.finish();
}

fn maass(c: &mut Criterion) {
    let e = eisenstein_expansion();
    c.bench_function("eval_maass", |b| {
        b.iter(|| eval_maass(&e, black_box(C64::new(0.2, 1.1)), None))
    });
}

fn twists(c: &mut Criterion) {
    let spec = eisenstein_pair();
    c.bench_function("characters_mod_101", |b| {
        b.iter(|| characters_mod(black_box(101)))
    });
    let psi = characters_mod(7).unwrap().into_iter().nth(2).unwrap();
    c.bench_function("twist_coefficients", |b| {
        b.iter(|| twist_coefficients(&spec.alpha1, &spec.beta1, &psi))
    });
}

criterion_group!(benches, numerics, engine, maass, twists);
criterion_main!(benches);
