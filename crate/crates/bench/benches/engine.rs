use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use oigb_bench::ring_generators;
use oigb_core::groebner::{betti_table, classical_buchberger_width, equivariant_buchberger};
use oigb_core::order::oi_divides_mod;
use oigb_core::sample;
use oigb_core::{GbConfig, KoszulComplex, PaperLex, Rationals, ResolveTarget, Signature, VariableScheme};
use rand::rngs::StdRng;
use rand::SeedableRng;

fn divisibility(c: &mut Criterion) {
    let sig = Signature::free(VariableScheme::Tensor { c: 2 }, 1);
    let mut rng = StdRng::seed_from_u64(1);
    let pairs: Vec<_> = (0..256)
        .map(|_| {
            let mu = sample::module_monomial(&mut rng, &sig, 3, 3).unwrap();
            let nu = sample::module_monomial(&mut rng, &sig, 6, 6).unwrap();
            (mu, nu)
        })
        .collect();
    c.bench_function("oi_divides_mod/256 pairs", |b| {
        b.iter(|| {
            pairs
                .iter()
                .filter(|(mu, nu)| oi_divides_mod(&sig, mu, nu).unwrap().is_some())
                .count()
        })
    });
}

fn buchberger(c: &mut Criterion) {
    let minors = ring_generators(2, &[(2, "x[1,1]*x[2,2] - x[1,2]*x[2,1]")]);
    let mut group = c.benchmark_group("classical_buchberger_width");
    for n in [3, 4, 5] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| classical_buchberger_width(&Rationals, &minors, Arc::new(PaperLex), black_box(n)))
        });
    }
    group.finish();
    let mixed = ring_generators(2, &[(1, "x[1,1]*x[2,1]"), (2, "x[1,1]*x[2,2] + x[1,2]*x[2,1]")]);
    c.bench_function("equivariant_buchberger/segre_mixed", |b| {
        b.iter(|| equivariant_buchberger(&Rationals, &mixed, Arc::new(PaperLex), GbConfig::default()).unwrap())
    });
    let squares = ring_generators(1, &[(1, "x[1,1]^2")]);
    c.bench_function("betti_table/squares widths 1..5", |b| {
        b.iter(|| {
            betti_table(
                &Rationals,
                &squares,
                Arc::new(PaperLex),
                &[1, 2, 3, 4, 5],
                4,
                ResolveTarget::Quotient,
            )
            .unwrap()
        })
    });
}

fn koszul(c: &mut Criterion) {
    let a =
        oigb_core::text::parse_polynomial(&Rationals, &VariableScheme::Tensor { c: 1 }, "x[1,1]^2", Some(1)).unwrap();
    let mut group = c.benchmark_group("koszul_homology");
    for n in [3, 4, 5] {
        let complex = KoszulComplex::new(&Rationals, &a, n).unwrap();
        let bound = complex.default_degree_bound().unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| complex.homology_dims(&Rationals, bound, n).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, divisibility, buchberger, koszul);
criterion_main!(benches);
