mod common;

use std::collections::{BTreeMap, BTreeSet};

use common::{ceiling_oracle, cyclic, ints, normals_i64, orthant, quadric, square};
use proptest::prelude::*;
use toric_conic::ratgeom::{lattice_solve, IntMat};
use toric_conic::{Error, ToricAlgebra};

/// Classifies `ceil(<-v/q, n_i>)` for every `v ∈ {0..q-1}^d` by integrality of
/// `N̂ m = c - rep` against each class representative.
fn coset_oracle(alg: &ToricAlgebra, q: i64) -> BTreeMap<usize, u64> {
    let normals = normals_i64(alg);
    let d = alg.rank();
    let nhat = IntMat::from_i64(d, &normals);
    let reps: Vec<Vec<i64>> = alg.enumerate_classes().iter().map(|c| c.to_i64().unwrap()).collect();
    let mut out = BTreeMap::new();
    for v in toric_conic::homs::box_points(&vec![(0, q - 1); d]) {
        let neg: Vec<i64> = v.iter().map(|x| -i64::try_from(x).unwrap()).collect();
        let c = ceiling_oracle(&normals, &neg, q);
        let k = reps
            .iter()
            .position(|r| {
                let diff: Vec<i64> = c.iter().zip(r).map(|(a, b)| a - b).collect();
                lattice_solve(&nhat, &ints(&diff)).is_some()
            })
            .expect("every coset lands in a class");
        *out.entry(k).or_insert(0) += 1;
    }
    out
}

fn oracle_minimal_q(alg: &ToricAlgebra) -> i64 {
    (1..=64).find(|&q| coset_oracle(alg, q).len() == alg.enumerate_classes().len()).unwrap()
}

#[test]
fn trivial_root() {
    for alg in [quadric(), square(), cyclic()] {
        let r = alg.decompose_root(1).unwrap();
        assert_eq!(r.multiplicities, BTreeMap::from([(alg.free_class_index(), 1)]));
    }
}

#[test]
fn quadric_square_root() {
    let alg = quadric();
    assert_eq!(alg.decompose_root(2).unwrap().multiplicities, BTreeMap::from([(0, 2), (1, 2)]));
}

#[test]
fn square_cube_root_hits_every_class() {
    let sq = square();
    assert_eq!(sq.decompose_root(3).unwrap().multiplicities.len(), 3);
}

#[test]
fn decompositions_match_the_oracle() {
    for alg in [quadric(), square(), cyclic()] {
        for q in 1..=4u64 {
            assert_eq!(alg.decompose_root(q).unwrap().multiplicities, coset_oracle(&alg, q as i64));
        }
    }
}

#[test]
fn minimal_complete_q_values() {
    assert_eq!(orthant(2).minimal_complete_q().unwrap(), 1);
    assert_eq!(orthant(3).minimal_complete_q().unwrap(), 1);
    assert_eq!(quadric().minimal_complete_q().unwrap(), 2);
    // q = 2 already reaches all three classes of the cyclic cone.
    assert_eq!(cyclic().minimal_complete_q().unwrap(), 2);
    for alg in [quadric(), square(), cyclic()] {
        assert_eq!(alg.minimal_complete_q().unwrap() as i64, oracle_minimal_q(&alg));
    }
}

#[test]
fn zero_q_is_rejected() {
    assert!(matches!(quadric().decompose_root(0), Err(Error::Input(_))));
}

#[test]
fn dmodule_reports() {
    let r = quadric().dmodule_report(3).unwrap();
    assert_eq!((r.e, r.lower_bound, r.upper_bound), (1, 2, 3));
    let s = square().dmodule_report(2).unwrap();
    assert!(2u64.pow(s.e) >= s.minimal_complete_q);
    assert_eq!((s.lower_bound, s.upper_bound), (3, 4));
    let o = orthant(2).dmodule_report(5).unwrap();
    assert!(o.regular);
    assert!(matches!(quadric().dmodule_report(4), Err(Error::NotPrime(4))));
}

#[test]
fn full_support_at_minimal_q() {
    for alg in [quadric(), square(), cyclic(), orthant(3)] {
        let q = alg.minimal_complete_q().unwrap();
        let classes: BTreeSet<usize> = alg.decompose_root(q).unwrap().multiplicities.keys().copied().collect();
        assert_eq!(classes, (0..alg.enumerate_classes().len()).collect());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    /// Multiplicities sum to q^d, and refining q to kq keeps every class that was hit.
    #[test]
    fn refinement_and_totals(which in 0usize..3, q in 1u64..=4, k in 1u64..=3) {
        let alg = [quadric(), square(), cyclic()][which].clone();
        let coarse = alg.decompose_root(q).unwrap();
        prop_assert_eq!(coarse.total(), q.pow(alg.rank() as u32));
        let fine = alg.decompose_root(q * k).unwrap();
        for c in coarse.multiplicities.keys() {
            prop_assert!(fine.multiplicities.contains_key(c));
        }
    }
}
