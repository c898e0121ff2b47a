mod common;

use std::collections::BTreeMap;

use common::{cv, cyclic, ints, orthant, q, quadric, square};
use proptest::prelude::*;
use toric_conic::ratgeom::QMat;
use toric_conic::{CeilingVector, Error, NccrVerdict, ScalarComplex, ToricAlgebra, Window};

fn shape(alg: &ToricAlgebra, c: &CeilingVector) -> Vec<BTreeMap<usize, usize>> {
    alg.conic_complex(c).unwrap().to_module_complex().class_shape(alg)
}

fn m(pairs: &[(usize, usize)]) -> BTreeMap<usize, usize> {
    pairs.iter().copied().collect()
}

#[test]
fn square_conic_complex_shapes() {
    let sq = square();
    // Degree 0 first.
    assert_eq!(shape(&sq, &cv(&[0, 0, 0, 0])), vec![m(&[(0, 1)]), m(&[(1, 2), (2, 2)]), m(&[(0, 4)]), m(&[(0, 1)])]);
    assert_eq!(shape(&sq, &cv(&[0, 0, 0, -1])), vec![m(&[(1, 1)]), m(&[(0, 2)]), m(&[(2, 1)])]);
    assert_eq!(shape(&sq, &cv(&[0, 0, 0, 1])), vec![m(&[(2, 1)]), m(&[(0, 2)]), m(&[(1, 1)])]);
}

#[test]
fn cyclic_conic_complexes_follow_the_index_rule() {
    let alg = cyclic();
    // Chamber i contains the 0-cell -(i/3) e_1; sigma maps that index to our class label.
    let sigma: Vec<usize> =
        (0..3).map(|i| alg.class_index(&alg.chamber_of(&[q(-i, 3), q(0, 1)]).unwrap()).unwrap()).collect();
    let k = 2i64;
    for i in 0..3i64 {
        let s = |j: i64| sigma[j.rem_euclid(3) as usize];
        let mut mid = BTreeMap::new();
        *mid.entry(s(i - 1)).or_insert(0) += 1;
        *mid.entry(s(i - k)).or_insert(0) += 1;
        let expected = vec![m(&[(s(i), 1)]), mid, m(&[(s(i - k - 1), 1)])];
        assert_eq!(shape(&alg, &alg.enumerate_classes()[s(i)]), expected, "chamber {i}");
    }
}

#[test]
fn graded_piece_examples() {
    let alg = quadric();
    let c = cv(&[0, 0]);
    let k = alg.conic_complex(&c).unwrap();
    let zero = ints(&[0, 0]);
    let own = alg.graded_piece(&k, &c, &zero).unwrap();
    assert_eq!(own.dims, vec![1, 0, 0]);
    assert_eq!(own.homology_ranks(), vec![1, 0, 0]);
    let adj = alg.graded_piece(&k, &cv(&[1, 0]), &zero).unwrap();
    assert_eq!(adj.dims, vec![1, 1, 0]);
    assert_eq!(adj.homology_ranks(), vec![0, 0, 0]);
    let none = alg.graded_piece(&k, &cv(&[-1, 0]), &zero).unwrap();
    assert_eq!(none.dims, vec![0, 0, 0]);
}

#[test]
fn homology_ranks_examples() {
    let id = QMat::from_rows(1, vec![vec![q(1, 1)]]);
    assert_eq!(ScalarComplex::new(vec![1, 1], vec![id]).unwrap().homology_ranks(), vec![0, 0]);
    let z = QMat::zeros(2, 3);
    assert_eq!(ScalarComplex::new(vec![2, 3], vec![z]).unwrap().homology_ranks(), vec![2, 3]);
}

#[test]
fn octahedral_slice_at_its_own_degree() {
    let sq = square();
    let c = cv(&[0, 0, 0, 0]);
    let k = sq.conic_complex(&c).unwrap();
    assert_eq!(sq.graded_piece(&k, &c, &ints(&[0, 0, 0])).unwrap().homology_ranks(), vec![1, 0, 0, 0]);
}

#[test]
fn empty_window_gives_empty_report() {
    let alg = quadric();
    let c = cv(&[0, 0]);
    let r = alg.verify_acyclicity(&c, &c, &Window { lo: vec![1, 1], hi: vec![0, 0] }).unwrap();
    assert_eq!(r.points_checked, 0);
    assert!(r.passed());
}

#[test]
fn projective_dimensions() {
    let sq = square();
    let pd: Vec<usize> = sq.enumerate_classes().iter().map(|c| sq.pdim_simple(c).unwrap()).collect();
    assert_eq!(pd, vec![3, 2, 2]);
    for c in quadric().enumerate_classes() {
        assert_eq!(quadric().pdim_simple(c).unwrap(), 2);
    }
}

#[test]
fn global_dimensions() {
    assert_eq!(square().global_dimension().unwrap(), 3);
    assert_eq!(quadric().global_dimension().unwrap(), 2);
    assert_eq!(orthant(4).global_dimension().unwrap(), 4);
}

#[test]
fn ext_examples() {
    let sq = square();
    assert_eq!(sq.ext_dims(&cv(&[0, 0, 0, 0]), &cv(&[0, 0, 0, -1])).unwrap()[1], 2);
    assert_eq!(sq.ext_dims(&cv(&[0, 0, 0, -1]), &cv(&[0, 0, 0, 1])).unwrap()[2], 1);
}

#[test]
fn no_torsion_on_test_cones() {
    for alg in [quadric(), square(), cyclic()] {
        assert!(alg.torsion_warnings().unwrap().is_empty());
        for c in alg.enumerate_classes() {
            for inv in alg.smith_invariants(c).unwrap() {
                assert!(inv.iter().all(|x| *x == 1.into()));
            }
        }
    }
}

#[test]
fn complete_verdicts() {
    assert_eq!(quadric().nccr_verdict(None).unwrap(), NccrVerdict::Nccr);
    assert_eq!(cyclic().nccr_verdict(None).unwrap(), NccrVerdict::Nccr);
    match square().nccr_verdict(None).unwrap() {
        NccrVerdict::NotNccr { witness, pdim } => {
            assert_eq!(pdim, 2);
            assert!(!square().has_zero_cell(&witness).unwrap());
        }
        v => panic!("{v:?}"),
    }
}

#[test]
fn partial_support_on_the_square_cone() {
    let sq = square();
    let cl = sq.enumerate_classes().to_vec();
    for other in [1, 2] {
        let sup = vec![cl[0].clone(), cl[other].clone()];
        assert_eq!(sq.nccr_verdict(Some(&sup)).unwrap(), NccrVerdict::Nccr);
        let r0 = sq.resolution(&sup, &cl[0]).unwrap();
        assert!(r0.spliced && r0.verified());
        assert_eq!(r0.pdim, 3);
        assert_eq!(r0.shape, vec![m(&[(0, 1)]), m(&[(0, 4), (other, 2)]), m(&[(0, 4), (other, 2)]), m(&[(0, 1)])]);
        assert_eq!(r0.minimal_shape, vec![m(&[(0, 1)]), m(&[(other, 2)]), m(&[(other, 2)]), m(&[(0, 1)])]);
        let r1 = sq.resolution(&sup, &cl[other]).unwrap();
        assert_eq!(r1.minimal_shape, vec![m(&[(other, 1)]), m(&[(0, 2)]), m(&[(0, 2)]), m(&[(other, 1)])]);
        assert!(r1.verified());
    }
}

#[test]
fn support_must_be_closed_and_contain_the_free_class() {
    let sq = square();
    let cl = sq.enumerate_classes().to_vec();
    let err = sq.resolution(&[cl[0].clone()], &cl[0]).unwrap_err();
    assert!(matches!(err, Error::SupportNotClosed(_)), "{err:?}");
    assert!(sq.nccr_verdict(Some(&[cl[1].clone(), cl[2].clone()])).is_err());
}

fn check_complexes(alg: &ToricAlgebra) -> Result<(), TestCaseError> {
    let cl = alg.enumerate_classes();
    for c in cl {
        let k = alg.conic_complex(c).unwrap();
        k.to_module_complex().check_square_zero().unwrap();
        prop_assert_eq!(k.length(), alg.pdim_simple(c).unwrap());
        prop_assert!(k.length() <= alg.rank());
        let census = alg.cell_census(c).unwrap();
        let mut sums = vec![0; census.len()];
        for c2 in cl {
            for (i, e) in alg.ext_dims(c, c2).unwrap().iter().enumerate() {
                sums[i] += e;
            }
        }
        prop_assert_eq!(sums, census);
    }
    prop_assert_eq!(alg.pdim_simple(&cl[alg.free_class_index()]).unwrap(), alg.rank());
    prop_assert_eq!(alg.global_dimension().unwrap(), alg.rank());
    let complete_ok = alg.nccr_verdict(None).unwrap() == NccrVerdict::Nccr;
    prop_assert_eq!(complete_ok, alg.cone().is_simplicial());
    Ok(())
}

#[test]
fn structural_laws_on_fixed_cones() {
    for alg in [quadric(), square(), cyclic(), orthant(3)] {
        check_complexes(&alg).unwrap();
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn structural_laws_on_random_cones(rays in prop::collection::vec(prop::collection::vec(-2i64..=2, 3), 3..5)) {
        let Ok(cone) = toric_conic::ConeSpec::from_primal_rays(3, rays.iter().map(|r| ints(r)).collect()) else {
            return Ok(());
        };
        let alg = ToricAlgebra::new(cone).unwrap();
        prop_assume!(alg.enumerate_classes().len() <= 12);
        check_complexes(&alg)?;
    }
}
