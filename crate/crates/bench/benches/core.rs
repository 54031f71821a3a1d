use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use ltype::census::{enumerate_domains, CensusOptions};
use ltype::delone::{delone_star, dv_polytope};
use ltype::fixtures;
use ltype::isometry::automorphisms;
use ltype::polyhedral::{dual_description, HCone};
use ltype::secondary::secondary_cone;

fn hypercube_cone(n: usize) -> HCone {
    // cone over [-1, 1]^n in R^{n+1}
    let mut facets = Vec::new();
    for i in 0..n {
        for s in [1i64, -1] {
            let mut f = vec![0i64; n + 1];
            f[0] = 1;
            f[i + 1] = s;
            facets.push(f);
        }
    }
    HCone::from_i64(n + 1, &facets).unwrap()
}

fn polyhedral(c: &mut Criterion) {
    let cube = hypercube_cone(5);
    c.bench_function("dd cube5", |b| b.iter(|| dual_description(black_box(&cube)).unwrap()));
}

fn lattice(c: &mut Criterion) {
    let d4 = fixtures::d4();
    let p5 = fixtures::principal(5);
    c.bench_function("delone star principal5", |b| b.iter(|| delone_star(black_box(&p5)).unwrap()));
    c.bench_function("dv polytope D4", |b| b.iter(|| dv_polytope(black_box(&d4)).unwrap()));
    c.bench_function("automorphisms D4", |b| b.iter(|| automorphisms(black_box(&d4)).unwrap()));
    let star = delone_star(&p5).unwrap();
    c.bench_function("secondary cone principal5", |b| b.iter(|| secondary_cone(black_box(&star)).unwrap()));
}

fn census(c: &mut Criterion) {
    let mut g = c.benchmark_group("census");
    g.sample_size(10);
    g.bench_function("enumerate d4", |b| {
        b.iter(|| enumerate_domains(4, &CensusOptions::default(), None, |_| {}).unwrap())
    });
    g.finish();
}

criterion_group!(benches, polyhedral, lattice, census);
criterion_main!(benches);
