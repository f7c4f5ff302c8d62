use criterion::{criterion_group, criterion_main, Criterion};
use spaceform_bench::{derivation_instance, octahedral, tetrahedral_cell};
use spaceform_core::autos::enumerate_automorphisms;
use spaceform_core::derivations::enumerate_derivations;
use spaceform_core::spaceforms::{orbit_count_oracle, OracleContext};

fn automorphisms(c: &mut Criterion) {
    let g = octahedral(2);
    c.bench_function("aut O*(2)", |b| b.iter(|| enumerate_automorphisms(&g).unwrap()));
}

fn oracle(c: &mut Criterion) {
    let params = tetrahedral_cell(2, 3);
    let ctx = OracleContext::default();
    orbit_count_oracle(&params, &ctx).unwrap();
    c.bench_function("orbit oracle T a=7 b=5 n=2 (warm)", |b| {
        b.iter(|| orbit_count_oracle(&params, &ctx).unwrap())
    });
    c.bench_function("orbit oracle T a=7 b=5 n=2 (cold)", |b| {
        b.iter(|| orbit_count_oracle(&params, &OracleContext::default()).unwrap())
    });
}

fn derivations(c: &mut Criterion) {
    let (h, chi) = derivation_instance();
    c.bench_function("derivations C(13)x|(C(5)xT*(1))", |b| {
        b.iter(|| enumerate_derivations(&h, &chi).unwrap())
    });
}

criterion_group!(benches, automorphisms, oracle, derivations);
criterion_main!(benches);
