use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use embguard_core::cse::{cluster, run_attack, AttackConfig, ClusterAlgo};
use embguard_core::linalg::{top_k_singular_vectors, Matrix};
use embguard_core::rng;
use embguard_core::scenario::{provide, verify_imitation, ScenarioConfig};
use embguard_core::simkit::{gen_world, SimConfig};
use embguard_core::verify::ks_two_sample;
use rand::Rng;

fn linalg(c: &mut Criterion) {
    let mut g = rng::rng(1);
    let data: Vec<f64> = (0..500 * 256).map(|_| g.random::<f64>() - 0.5).collect();
    let m = Matrix::from_flat(500, 256, data).unwrap();
    c.bench_function("top_k_singular_vectors 500x256 k=50", |b| {
        b.iter(|| top_k_singular_vectors(black_box(&m), 50).unwrap())
    });

    let a: Vec<f64> = (0..200).map(|_| g.random()).collect();
    let x: Vec<f64> = (0..200).map(|_| g.random()).collect();
    c.bench_function("ks_two_sample 200x200", |b| b.iter(|| ks_two_sample(black_box(&a), black_box(&x)).unwrap()));
}

fn pipeline(c: &mut Criterion) {
    let mut group = c.benchmark_group("pipeline");
    group.sample_size(10);
    let sim = SimConfig::default();
    group.bench_function("gen_world 2000 docs", |b| b.iter(|| gen_world(black_box(&sim)).unwrap()));

    let cfg = ScenarioConfig::default();
    let run = provide(&cfg).unwrap();
    group.bench_function("kmeans n=20", |b| {
        b.iter(|| cluster(&run.provided, 20, ClusterAlgo::Kmeans, 0).unwrap())
    });
    let attack = AttackConfig::default();
    group.bench_function("attack-cse defaults", |b| {
        b.iter(|| run_attack(&run.provided, &run.world.standard, black_box(&attack)).unwrap())
    });
    group.bench_function("verify imitation 200 probes", |b| {
        b.iter_batched(
            || cfg.clone(),
            |cfg| verify_imitation(&cfg, &run, &run.provided).unwrap(),
            BatchSize::SmallInput,
        )
    });
    group.finish();
}

criterion_group!(benches, linalg, pipeline);
criterion_main!(benches);
