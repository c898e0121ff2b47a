//! Exact rational geometry: linear systems, feasibility and integer lattices.

mod fm;
mod matrix;

use num_bigint::BigInt;
use num_rational::BigRational;

pub use fm::{Constraint, LinSystem, Relation};
pub use matrix::{
    column_hnf_with_transform, det_q, dot_q, dot_z, identity, int_vec, is_primitive, kernel_basis, lattice_solve,
    primitive, primitive_from_rational, rank_q, rank_z, rat_vec, row_hnf, row_hnf_with_transform, rref,
    smith_invariants, solve_q, IntMat, Matrix, QMat, Rref,
};

pub type Int = BigInt;
pub type Rat = BigRational;

/// Parses `"3"`, `"-1/2"` style rationals.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: Int = n.trim().parse().ok()?;
            let d: Int = d.trim().parse().ok()?;
            if d == Int::from(0) {
                return None;
            }
            Some(Rat::new(n, d))
        }
        None => s.parse::<Int>().ok().map(Rat::from_integer),
    }
}
