use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use degenkit_bench::{ngons, random_models};
use degenkit_core::blowup::blow_up_stratum;
use degenkit_core::mukai::{is_isometry, mukai_gram, swap_u_factors};
use degenkit_core::random::{random_center, rng};
use degenkit_core::Catalog;

fn rho(c: &mut Criterion) {
    let cat = Catalog::default_catalog();
    let models = random_models(100, 5);
    c.bench_function("rho_var/random100", |b| {
        b.iter(|| {
            for m in &models {
                black_box(m.rho_var().unwrap());
            }
        })
    });
    c.bench_function("rho_var_via_bundles/random100", |b| {
        b.iter(|| {
            for m in &models {
                black_box(m.rho_var_via_bundles().unwrap());
            }
        })
    });
    c.bench_function("rho_sgt/random100", |b| {
        b.iter(|| {
            for m in &models {
                black_box(m.rho_sgt(&cat).unwrap());
            }
        })
    });
    let mut group = c.benchmark_group("rho_var/ngon");
    for m in ngons(&[4, 16, 64]) {
        group.bench_with_input(
            BenchmarkId::from_parameter(m.components().len()),
            &m,
            |b, m| b.iter(|| black_box(m.rho_var().unwrap())),
        );
    }
    group.finish();
}

fn blowup(c: &mut Criterion) {
    let pairs: Vec<_> = random_models(50, 5)
        .into_iter()
        .enumerate()
        .filter_map(|(i, m)| {
            let mv = random_center(&mut rng(i as u64), &m, "e")?;
            Some((m, mv))
        })
        .collect();
    c.bench_function("blow_up_stratum/random", |b| {
        b.iter(|| {
            for (m, mv) in &pairs {
                black_box(blow_up_stratum(m, mv).unwrap());
            }
        })
    });
}

fn lattice(c: &mut Criterion) {
    let g = mukai_gram();
    let m = swap_u_factors(0, 2);
    c.bench_function("is_isometry/mukai", |b| {
        b.iter(|| black_box(is_isometry(&m, &g).unwrap()))
    });
    c.bench_function("mukai_gram/signature", |b| {
        b.iter(|| black_box(mukai_gram().signature()))
    });
}

criterion_group!(benches, rho, blowup, lattice);
criterion_main!(benches);
