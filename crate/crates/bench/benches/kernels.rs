use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use opinfo_core::compression::{rate_search, typical_set_error, SchemeFamily};
use opinfo_core::metrics::{fidelity, op_norm_lp};
use opinfo_core::theories::random::{rng, sample_state};
use opinfo_core::{SearchConfig, StateVec, SystemLabel};

fn norms(c: &mut Criterion) {
    let mut g = rng(1);
    for sys in [SystemLabel::squit(), SystemLabel::squit().compose(&SystemLabel::classical(2)).unwrap(), SystemLabel::classical(8)] {
        let delta = sample_state(&sys, &mut g).unwrap().coords() - sample_state(&sys, &mut g).unwrap().coords();
        c.bench_function(&format!("op_norm_lp/{sys}"), |b| b.iter(|| op_norm_lp(black_box(&delta), &sys).unwrap()));
    }
}

fn fidelities(c: &mut Criterion) {
    let mut g = rng(2);
    let cfg = SearchConfig::default();
    for sys in [SystemLabel::quantum(4), SystemLabel::squit()] {
        let (a, s) = (sample_state(&sys, &mut g).unwrap(), sample_state(&sys, &mut g).unwrap());
        c.bench_function(&format!("fidelity/{sys}"), |b| b.iter(|| fidelity(black_box(&a), &s, &cfg).unwrap()));
    }
}

fn rates(c: &mut Criterion) {
    let shannon = StateVec::from_slice(SystemLabel::classical(2), &[0.89, 0.11]).unwrap();
    c.bench_function("typical_set_error/N=1000", |b| {
        b.iter(|| typical_set_error(black_box(&[0.89, 0.11]), 1000, 550).unwrap())
    });
    c.bench_function("rate_search/classical N=1000", |b| {
        b.iter(|| rate_search(black_box(&shannon), 1000, 0.05, SchemeFamily::Typical).unwrap())
    });
    let trit = StateVec::from_slice(SystemLabel::classical(3), &[0.7, 0.2, 0.1]).unwrap();
    c.bench_function("rate_search/projective d=3 N=8", |b| {
        b.iter(|| rate_search(black_box(&trit), 8, 0.1, SchemeFamily::AllProjective).unwrap())
    });
}

criterion_group! {
    name = kernels;
    config = Criterion::default().sample_size(20);
    targets = norms, fidelities, rates
}
criterion_main!(kernels);
