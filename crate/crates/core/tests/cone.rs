mod common;

use common::ints;
use num_bigint::BigInt;
use proptest::prelude::*;
use toric_conic::ratgeom::{dot_z, rank_z, IntMat};
use toric_conic::{ConeSpec, Error};

fn vecs(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
    rows.iter().map(|r| ints(r)).collect()
}

fn sorted(mut v: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    v.sort();
    v
}

/// Facet normals of cone(rays) by brute force: every primitive candidate with
/// entries in [-2, 2] that is nonnegative on all rays and vanishes on a
/// rank d-1 subset of them.
fn facet_oracle(d: usize, rays: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    let rays = vecs(&rays.iter().map(Vec::as_slice).collect::<Vec<_>>());
    let mut out = Vec::new();
    let mut cand = vec![-2i64; d];
    loop {
        let n = ints(&cand);
        let g = cand.iter().fold(0i64, |g, &x| num_integer::gcd(g, x));
        if g == 1 && rays.iter().all(|r| dot_z(r, &n) >= BigInt::from(0)) {
            let zero: Vec<Vec<BigInt>> = rays.iter().filter(|r| dot_z(r, &n) == BigInt::from(0)).cloned().collect();
            if rank_z(&IntMat::from_rows(d, zero)) == d - 1 {
                out.push(n);
            }
        }
        let mut k = 0;
        while k < d && cand[k] == 2 {
            cand[k] = -2;
            k += 1;
        }
        if k == d {
            break;
        }
        cand[k] += 1;
    }
    sorted(out)
}

#[test]
fn dual_rays_quadric() {
    let c = ConeSpec::from_dual_rays(2, vecs(&[&[1, 1], &[-1, 1]])).unwrap();
    assert_eq!(c.normals(), vecs(&[&[1, 1], &[-1, 1]]).as_slice());
}

#[test]
fn dual_rays_cyclic() {
    let c = ConeSpec::from_dual_rays(2, vecs(&[&[0, 1], &[3, -2]])).unwrap();
    assert_eq!(c.normals(), vecs(&[&[0, 1], &[3, -2]]).as_slice());
}

#[test]
fn dual_rays_drop_redundant() {
    let c = ConeSpec::from_dual_rays(2, vecs(&[&[1, 0], &[1, 1], &[0, 1]])).unwrap();
    assert_eq!(c.normals(), vecs(&[&[1, 0], &[0, 1]]).as_slice());
}

#[test]
fn dual_rays_must_span() {
    let err = ConeSpec::from_dual_rays(2, vecs(&[&[1, 0]])).unwrap_err();
    assert!(matches!(err, Error::DualNotPointed), "{err:?}");
    assert!(ConeSpec::from_dual_rays(2, vecs(&[&[0, 0]])).is_err());
}

#[test]
fn primal_rays_square_matches_facet_oracle() {
    let rays = vec![vec![0, 0, 1], vec![1, 0, 1], vec![0, 1, 1], vec![1, 1, 1]];
    let c = ConeSpec::from_primal_rays(3, rays.iter().map(|r| ints(r)).collect()).unwrap();
    let expected = sorted(vecs(&[&[1, 0, 0], &[0, 1, 0], &[-1, 0, 1], &[0, -1, 1]]));
    assert_eq!(sorted(c.normals().to_vec()), expected);
    assert_eq!(facet_oracle(3, &rays), expected);
}

#[test]
fn primal_rays_orthant_and_quadric() {
    let o = ConeSpec::from_primal_rays(3, vecs(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])).unwrap();
    assert_eq!(sorted(o.normals().to_vec()), sorted(vecs(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])));
    let rays = vec![vec![-1, 1], vec![1, 1]];
    let c = ConeSpec::from_primal_rays(2, rays.iter().map(|r| ints(r)).collect()).unwrap();
    assert_eq!(sorted(c.normals().to_vec()), facet_oracle(2, &rays));
    assert_eq!(sorted(c.normals().to_vec()), sorted(vecs(&[&[1, 1], &[-1, 1]])));
}

#[test]
fn primal_rays_must_be_full_dimensional() {
    let err = ConeSpec::from_primal_rays(3, vecs(&[&[1, 0, 0], &[0, 1, 0]])).unwrap_err();
    assert!(matches!(err, Error::NotFullDimensional), "{err:?}");
}

#[test]
fn validate_flags() {
    let sq = ConeSpec::from_normals(3, vecs(&[&[1, 0, 0], &[0, 1, 0], &[-1, 0, 1], &[0, -1, 1]])).unwrap();
    assert!(!sq.validate().simplicial);
    assert!(sq.validate().pointed && sq.validate().full_dimensional);
    assert!(ConeSpec::from_normals(2, vecs(&[&[1, 1], &[-1, 1]])).unwrap().validate().simplicial);
    assert!(ConeSpec::from_normals(2, vecs(&[&[1, 0], &[0, 1]])).unwrap().validate().simplicial);
}

#[test]
fn restrict_square_facet_is_a_quadrant() {
    let sq = ConeSpec::from_normals(3, vecs(&[&[1, 0, 0], &[0, 1, 0], &[-1, 0, 1], &[0, -1, 1]])).unwrap();
    let r = sq.facet_restriction(0).unwrap();
    assert_eq!(r.cone.rank(), 2);
    assert_eq!(r.cone.num_normals(), 2);
    // The face C ∩ {x1 = 0} is spanned by (0,0,1) and (0,1,1): both lie in the span of the basis.
    let face = vecs(&[&[0, 0, 1], &[0, 1, 1]]);
    let mut rows = r.basis.clone();
    rows.extend(face);
    assert_eq!(rank_z(&IntMat::from_rows(3, rows)), 2);
}

#[test]
fn restrict_orthant_is_an_orthant() {
    let o = ConeSpec::from_normals(3, vecs(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])).unwrap();
    for i in 0..3 {
        let r = o.restrict_to_facet(i).unwrap();
        assert_eq!(r.rank(), 2);
        assert_eq!(sorted(r.normals().to_vec()), sorted(vecs(&[&[1, 0], &[0, 1]])));
    }
}

#[test]
fn restrict_quadric_facet_is_a_ray() {
    let c = ConeSpec::from_normals(2, vecs(&[&[1, 1], &[-1, 1]])).unwrap();
    let r = c.facet_restriction(0).unwrap();
    assert_eq!(r.cone.rank(), 1);
    assert_eq!(r.cone.num_normals(), 1);
    assert_eq!(r.basis.len(), 1);
    let b = &r.basis[0];
    assert!(*b == ints(&[-1, 1]) || *b == ints(&[1, -1]));
}

#[test]
fn restrict_invalid_index() {
    let c = ConeSpec::from_normals(2, vecs(&[&[1, 1], &[-1, 1]])).unwrap();
    assert!(matches!(c.restrict_to_facet(5), Err(Error::InvalidIndex { .. })));
}

#[test]
fn content_hash_depends_on_normal_order() {
    let a = ConeSpec::from_normals(2, vecs(&[&[1, 1], &[-1, 1]])).unwrap();
    let b = ConeSpec::from_normals(2, vecs(&[&[-1, 1], &[1, 1]])).unwrap();
    assert_ne!(a.content_hash(), b.content_hash());
    assert_eq!(a.content_hash(), ConeSpec::from_normals(2, vecs(&[&[1, 1], &[-1, 1]])).unwrap().content_hash());
}

fn ray_set() -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-2i64..=2, 3), 3..7)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn duality_round_trip(rays in ray_set()) {
        let Ok(c) = ConeSpec::from_dual_rays(3, rays.iter().map(|r| ints(r)).collect()) else {
            return Ok(());
        };
        let back = ConeSpec::from_primal_rays(3, c.generators().to_vec()).unwrap();
        prop_assert_eq!(sorted(back.normals().to_vec()), sorted(c.normals().to_vec()));
    }

    #[test]
    fn generators_are_extremal(rays in ray_set()) {
        let Ok(c) = ConeSpec::from_primal_rays(3, rays.iter().map(|r| ints(r)).collect()) else {
            return Ok(());
        };
        for g in c.generators() {
            prop_assert!(c.normals().iter().all(|n| dot_z(g, n) >= BigInt::from(0)));
            let tight: Vec<Vec<BigInt>> = c.normals().iter().filter(|n| dot_z(g, n) == BigInt::from(0)).cloned().collect();
            prop_assert!(rank_z(&IntMat::from_rows(3, tight)) >= 2);
        }
        // The oracle only searches entries in [-2, 2]; compare inside that box.
        let in_box: Vec<Vec<BigInt>> =
            c.normals().iter().filter(|n| n.iter().all(|x| x.magnitude() <= &2u32.into())).cloned().collect();
        prop_assert_eq!(sorted(in_box), facet_oracle(3, &rays));
    }

    #[test]
    fn facet_restriction_stays_pointed(rays in ray_set()) {
        let Ok(c) = ConeSpec::from_primal_rays(3, rays.iter().map(|r| ints(r)).collect()) else {
            return Ok(());
        };
        for i in 0..c.num_normals() {
            let r = c.restrict_to_facet(i).unwrap();
            let v = r.validate();
            prop_assert!(v.pointed && v.full_dimensional);
        }
    }
}
