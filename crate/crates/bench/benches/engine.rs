use std::collections::BTreeMap;
use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use cobarlab_core::comonad::{coaction_of_chains, comonad_k, free_reduced};
use cobarlab_core::corpus;
use cobarlab_core::cosimplicial::{cobar_algebraic, normalize_cosimplicial};
use cobarlab_core::cube::{cartesian_degree, hdbm_bound, random_cube};
use cobarlab_core::dold_kan::homotopy_groups;
use cobarlab_core::space::DEFAULT_BUDGET;
use cobarlab_core::ss::hss;
use cobarlab_core::tot::tower_connectivity_report;
use cobarlab_core::{homology, Conn, Ring};

fn chains(c: &mut Criterion) {
    let mut g = c.benchmark_group("homotopy_of_chains");
    for stem in ["s2", "moore_z2_2", "boundary_delta3"] {
        let x = corpus::load(stem);
        g.bench_with_input(BenchmarkId::from_parameter(stem), &x, |b, x| {
            b.iter(|| homotopy_groups(&free_reduced(x, Ring::Integers, 6).unwrap()))
        });
    }
    g.finish();
}

fn comonad(c: &mut Criterion) {
    let y = coaction_of_chains(&corpus::s2(), Ring::F2, 4, DEFAULT_BUDGET).unwrap();
    c.bench_function("k_of_sphere_level_4", |b| b.iter(|| comonad_k(black_box(&y.carrier), DEFAULT_BUDGET).unwrap()));
    let y = coaction_of_chains(&corpus::s2(), Ring::F2, 3, DEFAULT_BUDGET).unwrap();
    c.bench_function("cobar_depth_1_cap_3", |b| b.iter(|| cobar_algebraic(black_box(&y), 1, 3, DEFAULT_BUDGET).unwrap()));
}

fn cubes(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let cube = random_cube(&mut rng, Ring::Integers, 3, 6, 6, true);
    c.bench_function("cartesian_degree_3_cube", |b| b.iter(|| cartesian_degree(black_box(&cube), 8)));
    let k: BTreeMap<usize, Conn> = (1..16usize).map(|v| (v, if v == 15 { Conn::Infinite } else { Conn::Finite(v.count_ones() as i64 + 2) })).collect();
    c.bench_function("hdbm_bound_4_cube", |b| b.iter(|| hdbm_bound(4, black_box(&k)).unwrap()));
}

fn towers(c: &mut Criterion) {
    let y = coaction_of_chains(&corpus::s2(), Ring::F2, 3, DEFAULT_BUDGET).unwrap();
    let mut g = c.benchmark_group("cobar_sphere");
    g.sample_size(10);
    g.bench_function("tower_report", |b| b.iter(|| tower_connectivity_report(&y, 1, 2, 3, DEFAULT_BUDGET).unwrap()));
    let z = normalize_cosimplicial(&cobar_algebraic(&y, 1, 3, DEFAULT_BUDGET).unwrap().value);
    g.bench_function("spectral_sequence", |b| b.iter(|| hss(black_box(&z), 4, 2).unwrap()));
    g.bench_function("level_homology", |b| b.iter(|| homology(black_box(&z.levels[1]))));
    g.finish();
}

criterion_group!(benches, chains, comonad, cubes, towers);
criterion_main!(benches);
