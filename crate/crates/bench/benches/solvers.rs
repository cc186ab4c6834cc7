use criterion::{black_box, criterion_group, criterion_main, Criterion};
use qcorr::measures::{discord, discord_grid, Side};
use qcorr::npa::{measured_moments, test_locality};
use qcorr::reproduce::npa_settings;
use qcorr::witnesses::{correlation_operators, witness_sdp};
use qcorr::{states, PauliProductObservable};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

fn witness(c: &mut Criterion) {
    let rho = states::bell(2).unwrap().to_density();
    let ops: Vec<PauliProductObservable> = correlation_operators(&[2, 2]).unwrap();
    let m: Vec<f64> = ops.iter().map(|o| rho.expect(&o.matrix()).unwrap()).collect();
    c.bench_function("witness_sdp bell 3 ops", |b| b.iter(|| witness_sdp(black_box(&ops), black_box(&m)).unwrap()));
}

fn locality(c: &mut Criterion) {
    let mut g = c.benchmark_group("npa level 2");
    g.sample_size(10);
    let w = measured_moments(&states::w().to_density(), &npa_settings("w").unwrap()).unwrap();
    g.bench_function("W (3,2,2)", |b| b.iter(|| test_locality(black_box(&w), 3).unwrap()));
    let p = qcorr::PureState::basis(vec![2, 2, 2], &[0, 0, 0]).unwrap().to_density();
    let p = measured_moments(&p, &npa_settings("w").unwrap()).unwrap();
    g.bench_function("product (3,2,2)", |b| b.iter(|| test_locality(black_box(&p), 3).unwrap()));
    g.finish();
}

fn discords(c: &mut Criterion) {
    let mut rng = ChaCha20Rng::seed_from_u64(5);
    let rho = states::random_mixed(&[2, 2], 2, &mut rng).unwrap();
    c.bench_function("discord grid+refine", |b| b.iter(|| discord(black_box(&rho)).unwrap()));
    let mut g = c.benchmark_group("discord oracle");
    g.sample_size(10);
    g.bench_function("grid 129", |b| b.iter(|| discord_grid(black_box(&rho), Side::A, 129).unwrap()));
    g.finish();
}

criterion_group!(benches, witness, locality, discords);
criterion_main!(benches);
