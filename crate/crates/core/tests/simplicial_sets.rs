use cobarlab_core::corpus;
use cobarlab_core::ordinal::OrdinalMap;
use cobarlab_core::simplicial::SimplexRef;
use cobarlab_core::sset_json::{from_json, to_json};
use cobarlab_core::sset_ops::{point, product, skeleton, smash_tensor, standard_simplex};

#[test]
fn corpus_is_valid_and_round_trips() {
    for (name, text) in corpus::ALL {
        let x = from_json(text).unwrap();
        assert!(x.validate().is_empty(), "{name}: {:?}", x.validate());
        let once = to_json(&x);
        let twice = to_json(&from_json(&once).unwrap());
        assert_eq!(once, twice, "{name}");
    }
}

#[test]
fn s2_faces_collapse() {
    let x = corpus::s2();
    let sigma = SimplexRef::cell(x.cell_index("sigma").unwrap());
    for i in 0..3 {
        assert_eq!(x.face(i, &sigma), x.basepoint_simplex(1));
    }
}

#[test]
fn operators_on_standard_simplex() {
    let d2 = standard_simplex(2);
    let top = SimplexRef::cell(d2.cell_index("v0_1_2").unwrap());
    let a = OrdinalMap::coface(2, 0).compose(&OrdinalMap::coface(1, 0));
    let b = OrdinalMap::coface(2, 1).compose(&OrdinalMap::coface(1, 0));
    // both composites pick out vertex 2
    assert_eq!(d2.apply_operator(&a, &top).unwrap(), d2.apply_operator(&b, &top).unwrap());
    assert_eq!(d2.apply_operator(&a, &top).unwrap(), SimplexRef::cell(d2.cell_index("v2").unwrap()));
    assert_eq!(d2.apply_operator(&OrdinalMap::identity(2), &top).unwrap(), top);
    assert!(d2.apply_operator(&OrdinalMap::identity(1), &top).is_err());
}

#[test]
fn simplicial_identities_on_all_levels() {
    for (_, text) in corpus::ALL {
        let x = from_json(text).unwrap();
        for n in 1..5 {
            for s in x.simplices(n) {
                for j in 0..=n {
                    for i in (0..j).filter(|_| n >= 2) {
                        assert_eq!(x.face(i, &x.face(j, &s)), x.face(j - 1, &x.face(i, &s)));
                    }
                    if j < n {
                        for i in 0..=j {
                            assert_eq!(x.degeneracy(i, &x.degeneracy(j, &s)), x.degeneracy(j + 1, &x.degeneracy(i, &s)));
                        }
                    }
                }
                for j in 0..n {
                    assert_eq!(x.face(j, &x.degeneracy(j, &s)), s);
                    assert_eq!(x.face(j + 1, &x.degeneracy(j, &s)), s);
                }
            }
            assert_eq!(x.simplices(n).len() as u128, x.level_size(n));
        }
    }
}

#[test]
fn simplex_and_skeleton_counts() {
    let d1 = standard_simplex(1);
    assert_eq!(d1.cells_of_dim(0).count(), 2);
    assert_eq!(d1.cells_of_dim(1).count(), 1);
    let d3 = standard_simplex(3);
    assert_eq!(d3.cells_of_dim(1).count(), 6);
    assert_eq!(d3.cells_of_dim(2).count(), 4);
    assert!(skeleton(-1, &d3).cells.is_empty());
    let b = skeleton(1, &standard_simplex(2));
    assert_eq!((b.cells_of_dim(0).count(), b.cells_of_dim(1).count(), b.cells_of_dim(2).count()), (3, 3, 0));
    assert!(b.validate().is_empty());
}

#[test]
fn products_and_tensors_are_valid() {
    let p = product(&standard_simplex(1), &standard_simplex(1));
    assert!(p.validate().is_empty());
    assert_eq!(p.cells_of_dim(2).count(), 2);
    assert_eq!(p.cells_of_dim(1).count(), 5);
    let p = product(&standard_simplex(1), &standard_simplex(2));
    assert_eq!(p.cells_of_dim(3).count(), 3);
    assert!(p.validate().is_empty());
    let s2 = corpus::s2();
    let t = smash_tensor(&s2, &standard_simplex(1)).unwrap();
    assert!(t.validate().is_empty());
    let unit = smash_tensor(&s2, &standard_simplex(0)).unwrap();
    assert_eq!(unit.cells.len(), s2.cells.len());
    let zero = smash_tensor(&point(), &standard_simplex(2)).unwrap();
    assert_eq!(zero.cells.len(), 1);
}

#[test]
fn tensor_associativity_counts() {
    let x = corpus::load("s1");
    let (k, l) = (standard_simplex(1), standard_simplex(1));
    let left = smash_tensor(&smash_tensor(&x, &k).unwrap(), &l).unwrap();
    let right = smash_tensor(&x, &product(&k, &l)).unwrap();
    assert!(cobarlab_core::sset_ops::same_shape(&left, &right));
}

#[test]
fn mutated_faces_are_reported() {
    let x = from_json(corpus::BOUNDARY_DELTA3).unwrap();
    let mut y = x.clone();
    let tri = y.cell_index("v0_1_2").unwrap();
    y.cells[tri].faces.swap(0, 2);
    let report = y.validate();
    assert!(!report.is_empty());
    assert!(report.iter().all(|v| v.cell == "v0_1_2"));
}
