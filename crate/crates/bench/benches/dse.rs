use criterion::{criterion_group, criterion_main, Criterion};
use omr_core::bfv::HeParams;
use omr_core::dse::{explore, CostFixture, DesignSpace, FpgaBudget, Workload};

fn dse(c: &mut Criterion) {
    let work = Workload::from_params(&HeParams::sophomr()).unwrap();
    let fixture = CostFixture::bundled();
    let budget = FpgaBudget::u55c();
    let space = DesignSpace::default();
    c.bench_function("dse/u55c_full_grid", |b| {
        b.iter(|| explore(&space, &work, &fixture, &budget).unwrap())
    });
}

criterion_group!(benches, dse);
criterion_main!(benches);
