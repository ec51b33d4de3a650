use std::collections::BTreeMap;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cobarlab_core::comonad::{coaction_of_chains, comonad_k, counit, underlying};
use cobarlab_core::corpus;
use cobarlab_core::cosimplicial::synthetic_cosimplicial;
use cobarlab_core::cube::{cartesian_degree, cocartesian_degree, hdbm_bound, random_cube, punctured_hocolim, punctured_holim, total_hocofiber, total_hofiber};
use cobarlab_core::dold_kan::{counit_iso, denormalize, homotopy_groups, random_complex, scramble, unit_iso};
use cobarlab_core::space::DEFAULT_BUDGET;
use cobarlab_core::tot::tot_tower;
use cobarlab_core::{homology, map_connectivity, ChainMap, Conn, LinearMap, Ring, SimplicialModule, Verdict};

fn ring_of(z: bool) -> Ring {
    if z {
        Ring::Integers
    } else {
        Ring::F2
    }
}

/// Lower bound a verdict certifies.
fn lower(v: &Verdict) -> i64 {
    v.k
}

fn commutes_on_basis(f: &LinearMap, a: &SimplicialModule, b: &SimplicialModule, n: usize, x: usize) -> bool {
    let r = a.ring;
    let e: Vec<i64> = (0..a.dims[n]).map(|i| i64::from(i == x)).collect();
    let fx = f.maps[n].apply(r, &e);
    let faces = (0..a.faces[n].len()).all(|i| b.faces[n][i].apply(r, &fx) == f.maps[n - 1].apply(r, &a.faces[n][i].apply(r, &e)));
    let degens = n >= a.cap() || (0..a.degens[n].len()).all(|j| b.degens[n][j].apply(r, &fx) == f.maps[n + 1].apply(r, &a.degens[n][j].apply(r, &e)));
    faces && degens
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn boundaries_square_to_zero(seed in any::<u64>(), z in any::<bool>(), w in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_cube(&mut rng, ring_of(z), w, 4, 3, true);
        prop_assert!(total_hofiber(&c).check_d_squared().is_ok());
        prop_assert!(total_hocofiber(&c).check_d_squared().is_ok());
        prop_assert!(punctured_holim(&c).complex.check_d_squared().is_ok());
        prop_assert!(punctured_hocolim(&c).complex.check_d_squared().is_ok());
        let f = c.edge(0, 0);
        prop_assert!(f.cone().check_d_squared().is_ok());
        prop_assert!(f.fiber().check_d_squared().is_ok());
        prop_assert!(f.source.shift(3).check_d_squared().is_ok());
    }

    #[test]
    fn shift_reindexes_homology(seed in any::<u64>(), z in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_complex(&mut rng, ring_of(z), 5, 4);
        let h = homology(&c);
        prop_assert_eq!(homology(&c.shift(1)), h.shifted(1));
    }

    #[test]
    fn cocartesian_is_cartesian_plus_n(seed in any::<u64>(), z in any::<bool>(), n in 1usize..=2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_cube(&mut rng, ring_of(z), n + 1, 5, 4, true);
        prop_assert_eq!(cartesian_degree(&c, 6).offset(n as i64), cocartesian_degree(&c, 6 + n as i64));
    }

    #[test]
    fn total_fiber_of_an_edge_is_its_fiber(seed in any::<u64>(), z in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_cube(&mut rng, ring_of(z), 1, 5, 4, true);
        prop_assert!(homology(&total_hofiber(&c)).agrees_with(&homology(&c.edge(0, 0).fiber()), 4));
    }

    #[test]
    fn connectivity_survives_composition(seed in any::<u64>(), z in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_cube(&mut rng, ring_of(z), 2, 5, 3, true);
        let (f, g) = (c.edge(0, 0), c.edge(1, 1));
        let window = 5;
        let k = lower(&map_connectivity(f, window)).min(lower(&map_connectivity(g, window)));
        prop_assert!(lower(&map_connectivity(&g.compose(f), window)) >= k);
    }

    #[test]
    fn raising_a_face_never_lowers_the_bound(w in 2usize..=3, raw in proptest::collection::vec(0i64..8, 7), pick in 0usize..7, bump in 1i64..4) {
        let full = (1usize << w) - 1;
        // monotone input: k_V is the max over raw values of nonempty subsets
        let monotone = |raw: &[i64]| -> BTreeMap<usize, Conn> {
            (1..=full)
                .map(|v| {
                    let k = (1..=full).filter(|&u| u & v == u).map(|u| raw[u - 1]).max().unwrap();
                    (v, if v == full { Conn::Infinite } else { Conn::Finite(k) })
                })
                .collect()
        };
        let before = hdbm_bound(w, &monotone(&raw[..full])).unwrap();
        let mut raised = raw[..full].to_vec();
        raised[pick % full] += bump;
        let after = hdbm_bound(w, &monotone(&raised)).unwrap();
        prop_assert!(after.k >= before.k);
        // the witness attains the bound
        let kv = monotone(&raw[..full]);
        let sum = before.witness.iter().fold(Conn::Finite(w as i64 - 1), |acc, v| acc.plus(kv[v]));
        prop_assert_eq!(sum, before.k);
    }

    #[test]
    fn dold_kan_round_trips(seed in any::<u64>(), z in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_complex(&mut rng, ring_of(z), 3, 3);
        prop_assert!(unit_iso(&c, 4).is_ok());
        let g = denormalize(&c, 4).unwrap();
        prop_assert!(g.validate().is_empty());
        prop_assert!(counit_iso(&scramble(&mut rng, &g)).is_ok());
        prop_assert!(homotopy_groups(&g).agrees_with(&homology(&c), 3));
    }

    #[test]
    fn tot_tower_composites_agree(seed in any::<u64>(), depth in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let normal: Vec<_> = (0..=depth).map(|_| random_complex(&mut rng, Ring::F2, 3, 2)).collect();
        let delta: Vec<_> = (0..depth).map(|k| ChainMap::zero(&normal[k], &normal[k + 1])).collect();
        let z = synthetic_cosimplicial(Ring::F2, &normal, &delta, depth).unwrap();
        prop_assert!(z.validate().is_empty());
        let (nd, tower) = tot_tower(&z);
        prop_assert!(tower.maps.iter().all(|f| f.check().is_ok()));
        prop_assert!(tower.check_composites(&nd).is_empty());
        prop_assert!(homology(&tower.stages[0]).agrees_with(&homology(&z.levels[0]), 2));
    }

    #[test]
    fn structure_maps_commute_on_basis_vectors(stem in 0usize..corpus::ALL.len(), n in 1usize..=2, pick in any::<u64>()) {
        let x = cobarlab_core::sset_json::from_json(corpus::ALL[stem].1).unwrap();
        let y = coaction_of_chains(&x, Ring::F2, 2, DEFAULT_BUDGET).unwrap();
        let ky = comonad_k(&y.carrier, DEFAULT_BUDGET).unwrap();
        let eps = counit(&y.carrier).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(pick);
        if y.carrier.dims[n] > 0 {
            let b = rng.gen_range(0..y.carrier.dims[n]);
            prop_assert!(commutes_on_basis(&y.coaction, &y.carrier, &ky, n, b));
        }
        if ky.dims[n] > 0 {
            let b = rng.gen_range(0..ky.dims[n]);
            prop_assert!(commutes_on_basis(&eps, &ky, &y.carrier, n, b));
        }
    }

    #[test]
    fn underlying_levels_have_prime_power_size(stem in 0usize..corpus::ALL.len()) {
        let x = cobarlab_core::sset_json::from_json(corpus::ALL[stem].1).unwrap();
        let y = coaction_of_chains(&x, Ring::F2, 2, DEFAULT_BUDGET).unwrap();
        let u = underlying(&y.carrier, DEFAULT_BUDGET).unwrap();
        for n in 0..=2 {
            prop_assert_eq!(u.sizes[n] as u64, 1u64 << y.carrier.dims[n]);
        }
        // the counit splits the coaction
        let eps = counit(&y.carrier).unwrap();
        prop_assert!(eps.compose(&y.coaction).is_identity());
    }
}

