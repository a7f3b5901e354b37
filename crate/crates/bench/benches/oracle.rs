use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use rklat_core::rewrite::{search, AxiomId, Statement};
use rklat_core::semantics::{equiv_bounded, refute};
use rklat_core::{eval, parse, Interpretation, OracleConfig};

fn axioms(c: &mut Criterion) {
    let cfg = OracleConfig::default();
    for ax in [AxiomId::ConvSeq, AxiomId::PlusSeq, AxiomId::TestInter] {
        let s = ax.schema();
        c.bench_function(&format!("equiv_bounded/{}", ax.name()), |b| {
            b.iter(|| equiv_bounded(black_box(&s.lhs), black_box(&s.rhs), &cfg))
        });
    }
}

fn refutation(c: &mut Criterion) {
    let cfg = OracleConfig::default();
    let (e, f) = (parse("x . y").unwrap(), parse("y . x").unwrap());
    c.bench_function("refute/x.y<=y.x", |b| b.iter(|| refute(black_box(&e), black_box(&f), &cfg)));
}

fn evaluation(c: &mut Criterion) {
    let sigma = Interpretation::parse("bound = 6\nx = { a, ab, _ }\ny = { b, ba }\n").unwrap();
    let e = parse("(x . y' & y^+ . x)^+ + x'^+").unwrap();
    c.bench_function("eval/bound6", |b| b.iter(|| eval(black_box(&e), &sigma)));
}

fn proof_search(c: &mut Criterion) {
    let s = Statement::parse("0' == 0").unwrap();
    c.bench_function("search/0'==0", |b| b.iter(|| search(black_box(&s), 6, 40)));
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = axioms, refutation, evaluation, proof_search
}
criterion_main!(benches);
