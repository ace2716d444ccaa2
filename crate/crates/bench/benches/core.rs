use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use unichan_core::bounds::{lower_envelope, z_r, zero_error_capacity};
use unichan_core::codebook::count;
use unichan_core::{
    verify_successful, Channel, ChannelGraph, ModifiedRubber, RunConstraint, Side,
    UnidirectionalChannel, UnidirectionalRubber, VerifyOptions,
};

fn lp(c: &mut Criterion) {
    let z6 = ChannelGraph::z(6).unwrap();
    c.bench_function("zero_error_capacity z q=6", |b| {
        b.iter(|| zero_error_capacity(black_box(&z6)))
    });
    let star = ChannelGraph::gamma_star(4).unwrap();
    c.bench_function("zero_error_capacity star q=4", |b| {
        b.iter(|| zero_error_capacity(black_box(&star)))
    });
}

fn rates(c: &mut Criterion) {
    c.bench_function("z_r q=3 r=12", |b| {
        b.iter(|| z_r(black_box(3), black_box(12)))
    });
    c.bench_function("lower_envelope q=5 tau=0.1", |b| {
        b.iter(|| lower_envelope(black_box(5), black_box(0.1)))
    });
    let rc = RunConstraint::new(3, 0, 4).unwrap();
    c.bench_function("count q=3 r=4 n=200", |b| {
        b.iter(|| count(rc, black_box(200)))
    });
}

fn verifier(c: &mut Criterion) {
    let opts = VerifyOptions {
        parallel: false,
        ..VerifyOptions::default()
    };
    let z: Channel = ChannelGraph::z(2).unwrap().into();
    let rubber = ModifiedRubber::new(2, 2, Side::Z, 6, 1).unwrap();
    c.bench_function("verify rubber q=2 n=6 t=1", |b| {
        b.iter(|| verify_successful(&rubber, &z, 1, &opts).unwrap())
    });
    let pair: Channel = UnidirectionalChannel::z_pair(3).unwrap().into();
    let uni = UnidirectionalRubber::new(3, 2, 6, 1).unwrap();
    c.bench_function("verify uni-rubber q=3 n=6 t=1", |b| {
        b.iter(|| verify_successful(&uni, &pair, 1, &opts).unwrap())
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(20);
    targets = lp, rates, verifier
}
criterion_main!(benches);
