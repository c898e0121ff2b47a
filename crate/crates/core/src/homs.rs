//! Graded Hom modules between conic modules, described by their monomial support.

use serde::Serialize;

use crate::chambers::{CeilingVector, ToricAlgebra};
use crate::cone::IntVec;
use crate::error::{Error, Result};
use crate::ratgeom::Int;

/// `{m ∈ M : <m, n_i> >= bound_i for all i}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonomialSupport {
    pub bound: CeilingVector,
}

impl MonomialSupport {
    pub fn contains(&self, alg: &ToricAlgebra, m: &[Int]) -> bool {
        alg.lattice().apply(m).iter().zip(&self.bound.0).all(|(a, b)| a >= b)
    }
}

impl ToricAlgebra {
    /// Support of `Hom(A_c, A_c')`: `m` with `c + N̂m <= c'` in the chamber order.
    pub fn hom_support(&self, c: &CeilingVector, c2: &CeilingVector) -> Result<MonomialSupport> {
        self.require_feasible(c)?;
        self.require_feasible(c2)?;
        Ok(MonomialSupport { bound: c2.sub(c) })
    }

    /// Dimension of the degree-zero part: 1 iff `A_c ⊆ A_c'`.
    pub fn hom_dim_degree_zero(&self, c: &CeilingVector, c2: &CeilingVector) -> Result<usize> {
        self.require_feasible(c)?;
        self.require_feasible(c2)?;
        Ok(usize::from(self.leq(c, c2)))
    }

    pub fn is_radical_monomial(&self, c: &CeilingVector, c2: &CeilingVector, m: &[Int]) -> Result<bool> {
        if m.len() != self.rank() {
            return Err(Error::DimensionMismatch { expected: self.rank(), found: m.len() });
        }
        let support = self.hom_support(c, c2)?;
        if !support.contains(self, m) {
            return Err(Error::OutsideSupport(format!("{:?}", m.iter().map(ToString::to_string).collect::<Vec<_>>())));
        }
        Ok(c.add(&self.lattice().apply(m)) != *c2)
    }

    /// The support is that of a conic module iff `c' - c` is a feasible ceiling vector.
    pub fn hom_is_conic(&self, c: &CeilingVector, c2: &CeilingVector) -> Result<bool> {
        self.require_feasible(c)?;
        self.require_feasible(c2)?;
        Ok(self.is_feasible(&c2.sub(c)))
    }

    /// On simplicial cones `Hom(A_c, A_c') = A_{c' - c}`.
    pub fn simplicial_hom_form(&self, c: &CeilingVector, c2: &CeilingVector) -> Result<CeilingVector> {
        if !self.cone().is_simplicial() {
            return Err(Error::Unsupported("closed Hom form requires a simplicial cone".into()));
        }
        let support = self.hom_support(c, c2)?;
        if !self.is_feasible(&support.bound) {
            return Err(Error::Invariant(format!("Hom({c}, {c2}) is not conic on a simplicial cone")));
        }
        Ok(support.bound)
    }

    /// Lattice points of the box `|m_j| <= radius`, in lexicographic order.
    pub fn window_points(&self, radius: i64) -> Vec<IntVec> {
        box_points(&vec![(-radius, radius); self.rank()])
    }
}

/// All integer points of a product of closed intervals, lexicographic order.
pub fn box_points(ranges: &[(i64, i64)]) -> Vec<IntVec> {
    let mut out: Vec<IntVec> = vec![Vec::new()];
    for &(lo, hi) in ranges {
        let mut next = Vec::new();
        for p in &out {
            for x in lo..=hi {
                let mut q = p.clone();
                q.push(Int::from(x));
                next.push(q);
            }
        }
        out = next;
    }
    out
}
