#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use toric_conic::{CeilingVector, ToricAlgebra};

pub fn quadric() -> ToricAlgebra {
    ToricAlgebra::from_normals_i64(2, &[vec![1, 1], vec![-1, 1]]).unwrap()
}

pub fn square() -> ToricAlgebra {
    ToricAlgebra::from_normals_i64(3, &[vec![1, 0, 0], vec![0, 1, 0], vec![-1, 0, 1], vec![0, -1, 1]]).unwrap()
}

pub fn cyclic() -> ToricAlgebra {
    ToricAlgebra::from_normals_i64(2, &[vec![0, 1], vec![3, -2]]).unwrap()
}

pub fn orthant(d: usize) -> ToricAlgebra {
    let normals: Vec<Vec<i64>> = (0..d).map(|i| (0..d).map(|j| i64::from(i == j)).collect()).collect();
    ToricAlgebra::from_normals_i64(d, &normals).unwrap()
}

pub fn cv(v: &[i64]) -> CeilingVector {
    CeilingVector::from_i64(v)
}

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// Ceiling of `<v, n>` computed with plain integer arithmetic on a common denominator.
pub fn ceiling_oracle(normals: &[Vec<i64>], num: &[i64], den: i64) -> Vec<i64> {
    normals
        .iter()
        .map(|n| {
            let s: i64 = n.iter().zip(num).map(|(a, b)| a * b).sum();
            s.div_euclid(den) + i64::from(s.rem_euclid(den) != 0)
        })
        .collect()
}

pub fn normals_i64(alg: &ToricAlgebra) -> Vec<Vec<i64>> {
    alg.cone().normals().iter().map(|n| n.iter().map(|x| i64::try_from(x).unwrap()).collect()).collect()
}
