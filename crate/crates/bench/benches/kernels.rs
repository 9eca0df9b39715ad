use criterion::{criterion_group, criterion_main, Criterion};
use tvcat_bench::{caps, diamond, diamond_unit, lawvere_weights, theory};
use tvcat_core::{
    cocomplete_check_with, compose, presheaf_cat, Distributor, InjectivityUniverse, PhiClass,
    VMatrix,
};

fn bench_kleisli(c: &mut Criterion) {
    let unit = diamond_unit();
    c.bench_function("kleisli_compose_diamond", |b| {
        b.iter(|| Distributor::compose(&unit, &unit))
    });
    c.bench_function("extension_diamond", |b| {
        b.iter(|| Distributor::extension(&unit, &unit))
    });
}

fn bench_txi(c: &mut Criterion) {
    let x = diamond();
    let th = x.theory().clone();
    let structure = x.structure().clone();
    c.bench_function("t_xi_extend_4x4", |b| b.iter(|| th.t_xi_extend(&structure)));
}

fn bench_presheaves(c: &mut Criterion) {
    let x = diamond();
    let caps = caps();
    c.bench_function("presheaf_cat_diamond_all", |b| {
        b.iter(|| presheaf_cat(&x, PhiClass::All, &caps).unwrap())
    });
}

fn bench_cocompleteness(c: &mut Criterion) {
    let x = diamond();
    let caps = caps();
    let universe = InjectivityUniverse::build(&theory(), PhiClass::Inhabited, &caps).unwrap();
    c.bench_function("cocomplete_check_diamond_inhabited", |b| {
        b.iter(|| cocomplete_check_with(&x, PhiClass::Inhabited, &caps, &universe).unwrap())
    });
}

fn bench_minplus(c: &mut Criterion) {
    let w = lawvere_weights();
    c.bench_function("minplus_closure_6", |b| {
        b.iter(|| {
            let id = VMatrix::identity(w.src().clone(), w.quantale().clone());
            let mut closure = id.clone();
            let mut power = id;
            for _ in 0..5 {
                power = compose(&power, &w);
                closure = closure.join(&power);
            }
            closure
        })
    });
}

criterion_group!(
    benches,
    bench_kleisli,
    bench_txi,
    bench_presheaves,
    bench_cocompleteness,
    bench_minplus
);
criterion_main!(benches);
