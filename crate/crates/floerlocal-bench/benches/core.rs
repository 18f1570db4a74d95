//! Benchmarks of the hot paths: reduction, characteristic multi-set
//! computation, the local-map search, and one deduction step.

use criterion::{black_box, criterion_group, criterion_main, Criterion};

use floerlocal::deduce::{candidates, DeductionInput};
use floerlocal::hat::hat_of;
use floerlocal::localequiv::find_local_map;
use floerlocal::mazur::lemma33_constraints;
use floerlocal::standard::{build_standard, StandardParams};
use floerlocal::BigradedComplex;

fn params(s: &str) -> StandardParams {
    StandardParams::parse(s).unwrap()
}

fn tensor_square(s: &str) -> BigradedComplex {
    let c = build_standard(&params(s)).complex;
    c.tensor(&c).unwrap()
}

fn bench_reduce(c: &mut Criterion) {
    // A 27-generator unreduced complex: the tensor cube of the smallest
    // nontrivial standard complex.
    let base = build_standard(&params("1,-1")).complex;
    let cube = base.tensor(&base).unwrap().tensor(&base).unwrap();
    c.bench_function("reduce tensor cube", |b| b.iter(|| black_box(&cube).reduce()));
}

fn bench_ch(c: &mut Criterion) {
    let f = hat_of(&build_standard(&params("1,-3,3,-2,2,-1")).complex).unwrap();
    c.bench_function("ch from basis", |b| b.iter(|| black_box(&f).ch_from_basis().unwrap()));
    c.bench_function("ch from definition", |b| b.iter(|| black_box(&f).ch_from_definition()));
}

fn bench_local_map(c: &mut Criterion) {
    let a = tensor_square("1,-1").reduce();
    let b2 = build_standard(&params("1,-1,1,-1")).complex;
    c.bench_function("find local map", |b| {
        b.iter(|| find_local_map(black_box(&a), black_box(&b2)).unwrap().unwrap())
    });
}

fn bench_deduction_step(c: &mut Criterion) {
    let cs = lemma33_constraints(4).unwrap();
    c.bench_function("deduction step n=4", |b| {
        b.iter(|| {
            let inp = DeductionInput::new(cs.clone(), 5, 1, 8, 6).unwrap();
            let found = candidates(black_box(&inp));
            assert_eq!(found.len(), 1);
            found
        })
    });
}

criterion_group!(benches, bench_reduce, bench_ch, bench_local_map, bench_deduction_step);
criterion_main!(benches);
