//! Open cells of a chamber, open conic modules, facet pairs and incidence signs.

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::chambers::{CeilingVector, ToricAlgebra};
use crate::cone::IntVec;
use crate::error::{Error, Result};
use crate::ratgeom::{det_q, kernel_basis, rank_z, rat_vec, rref, Int, IntMat, LinSystem, QMat, Rat, Relation};

/// The open cell `τ_Ω` of a chamber: strict inequalities for `j ∈ omega`,
/// equalities `<x, n_j> = c_j` otherwise.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cell {
    pub chamber: CeilingVector,
    /// Sorted indices of the strict constraints.
    pub omega: Vec<usize>,
    pub codim: usize,
    /// A relative interior point.
    #[serde(skip)]
    pub witness: Vec<Rat>,
}

impl Cell {
    /// Indices of the active (equality) normals.
    pub fn active(&self) -> Vec<usize> {
        (0..self.chamber.len()).filter(|j| !self.omega.contains(j)).collect()
    }
}

/// A cell together with the canonical basis of its direction space.
#[derive(Clone, Debug)]
pub struct OrientedCell {
    pub cell: Cell,
    pub frame: Vec<IntVec>,
    /// Free columns of the echelon form, one per frame vector.
    free_columns: Vec<usize>,
}

impl ToricAlgebra {
    fn cell_system(&self, c: &CeilingVector, mask: u64, closed: bool) -> LinSystem {
        let mut sys = LinSystem::new(self.rank());
        for (j, (n, cj)) in self.cone().normals().iter().zip(&c.0).enumerate() {
            let a = rat_vec(n);
            let hi = Rat::from_integer(cj.clone());
            if mask >> j & 1 == 1 {
                sys.push(a.clone(), if closed { Relation::Le } else { Relation::Lt }, hi);
                sys.push_ge(a, !closed, Rat::from_integer(cj - Int::one()));
            } else {
                sys.push(a, Relation::Eq, hi);
            }
        }
        sys
    }

    fn active_rank(&self, mask: u64) -> usize {
        let rows: Vec<IntVec> =
            (0..self.num_normals()).filter(|j| mask >> j & 1 == 0).map(|j| self.cone().normals()[j].clone()).collect();
        rank_z(&IntMat::from_rows(self.rank(), rows))
    }

    /// All nonempty cells of the chamber, ordered by codim then `omega`.
    pub fn enumerate_cells(&self, c: &CeilingVector) -> Result<Vec<Cell>> {
        self.require_feasible(c)?;
        let t = self.num_normals();
        let full: u64 = (1u64 << t) - 1;
        let mut dead = vec![false; 1usize << t];
        let mut cells = Vec::new();
        // Descending |Ω|: if the closure of τ_Ω is empty, so is every τ_Ω' with Ω' ⊆ Ω.
        for size in (0..=t).rev() {
            let layer: Vec<u64> =
                (0..=full).filter(|m| m.count_ones() as usize == size && !dead[*m as usize]).collect();
            let results: Vec<(u64, bool, Option<Vec<Rat>>)> = layer
                .par_iter()
                .map(|&m| {
                    let closure = self.cell_system(c, m, true).is_feasible();
                    let open = if closure { self.cell_system(c, m, false).find_point() } else { None };
                    (m, closure, open)
                })
                .collect();
            for (m, closure, open) in results {
                if !closure {
                    let mut s = m;
                    loop {
                        dead[s as usize] = true;
                        if s == 0 {
                            break;
                        }
                        s = (s - 1) & m;
                    }
                    continue;
                }
                if let Some(witness) = open {
                    let omega = (0..t).filter(|j| m >> j & 1 == 1).collect();
                    cells.push(Cell { chamber: c.clone(), omega, codim: self.active_rank(m), witness });
                }
            }
        }
        cells.sort_by(|a, b| a.codim.cmp(&b.codim).then_with(|| a.omega.cmp(&b.omega)));
        if cells.iter().filter(|x| x.codim == 0).count() != 1 {
            return Err(Error::Invariant(format!("chamber {c} does not have exactly one interior cell")));
        }
        Ok(cells)
    }

    /// `c'_j = c_j + 1` for active `j`, else `c_j`.
    pub fn open_conic(&self, cell: &Cell) -> CeilingVector {
        let mut v = cell.chamber.0.clone();
        for j in cell.active() {
            v[j] += 1;
        }
        CeilingVector(v)
    }

    pub fn is_facet_pair(&self, inner: &Cell, outer: &Cell) -> Result<bool> {
        if inner.chamber != outer.chamber {
            return Err(Error::DifferentChambers);
        }
        let subset = inner.omega.len() < outer.omega.len() && inner.omega.iter().all(|j| outer.omega.contains(j));
        Ok(subset && inner.codim == outer.codim + 1)
    }

    pub fn orient(&self, cell: &Cell) -> OrientedCell {
        let rows: Vec<Vec<Rat>> = cell.active().iter().map(|&j| rat_vec(&self.cone().normals()[j])).collect();
        let m = QMat::from_rows(self.rank(), rows);
        let pivots = rref(&m).pivots;
        let free_columns = (0..self.rank()).filter(|c| !pivots.contains(c)).collect();
        OrientedCell { cell: cell.clone(), frame: kernel_basis(&m), free_columns }
    }

    /// Orientation of `[u, frame(inner)]` against `frame(outer)`, with
    /// `u = y - z` for interior points `y` of `inner` and `z` of `outer`.
    pub fn incidence_sign(&self, inner: &OrientedCell, outer: &OrientedCell) -> Result<i32> {
        if !self.is_facet_pair(&inner.cell, &outer.cell)? {
            return Err(Error::NotFacetPair);
        }
        let u: Vec<Rat> = inner.cell.witness.iter().zip(&outer.cell.witness).map(|(y, z)| y - z).collect();
        let k = outer.frame.len();
        let mut cols: Vec<Vec<Rat>> = vec![u];
        cols.extend(inner.frame.iter().map(|f| rat_vec(f)));
        let mut m = QMat::zeros(k, k);
        for (c, v) in cols.iter().enumerate() {
            for (r, &fc) in outer.free_columns.iter().enumerate() {
                m[(r, c)] = v[fc].clone();
            }
        }
        let det = det_q(&m);
        if det.is_zero() {
            return Err(Error::Invariant("degenerate orientation in incidence sign".into()));
        }
        Ok(if det.is_positive() { 1 } else { -1 })
    }

    pub fn has_zero_cell(&self, c: &CeilingVector) -> Result<bool> {
        Ok(self.enumerate_cells(c)?.iter().any(|x| x.codim == self.rank()))
    }

    /// Number of cells per codim, index = codim.
    pub fn cell_census(&self, c: &CeilingVector) -> Result<Vec<usize>> {
        let cells = self.enumerate_cells(c)?;
        let mut census = vec![0; cells.iter().map(|x| x.codim).max().unwrap_or(0) + 1];
        for x in &cells {
            census[x.codim] += 1;
        }
        Ok(census)
    }
}

/// Comparison of chambers meeting the facet hyperplane `H = {<x, n_i> = 0}`
/// with the chambers of the restricted cone, sampled on a grid in `H`.
#[derive(Clone, Debug, Serialize)]
pub struct RestrictionCheck {
    pub facet: usize,
    #[serde(serialize_with = "normals_json")]
    pub restricted_normals: Vec<IntVec>,
    /// Observed (chamber of R, chamber of the facet cone) pairs, deduplicated.
    pub pairs: Vec<(CeilingVector, CeilingVector)>,
    /// Every R-chamber meets exactly one facet chamber.
    pub well_defined: bool,
    /// Distinct R-chambers meet distinct facet chambers.
    pub injective: bool,
    /// `c <= c'` iff their images compare the same way.
    pub order_preserved: bool,
    /// Cells of `c` inside `H` have the codims of the image's cells plus one.
    pub codims_preserved: bool,
    pub counterexamples: Vec<String>,
}

fn normals_json<S: serde::Serializer>(v: &[IntVec], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|n| crate::io::int_list_value(n)))
}

impl RestrictionCheck {
    pub fn is_bijection(&self) -> bool {
        self.well_defined && self.injective && self.order_preserved && self.codims_preserved
    }
}

impl ToricAlgebra {
    /// Samples `z ∈ (1/q) Z^(d-1)` with `|z_k| <= radius` in facet coordinates.
    pub fn restriction_check(&self, facet: usize, radius: i64) -> Result<RestrictionCheck> {
        let fr = self.cone().facet_restriction(facet)?;
        let sub = ToricAlgebra::new(fr.cone.clone())?;
        let d = self.rank();
        let q = 2
            * (1 + sub
                .cone()
                .normals()
                .iter()
                .map(|n| n.iter().map(|x| x.magnitude().clone()).sum::<num_bigint::BigUint>())
                .max()
                .and_then(|x| num_traits::ToPrimitive::to_i64(&x))
                .unwrap_or(1));
        let ranges = vec![(-radius * q, radius * q); d - 1];
        let mut pairs = std::collections::BTreeSet::new();
        for z in crate::homs::box_points(&ranges) {
            let zq: Vec<Rat> = z.iter().map(|x| Rat::new(x.clone(), Int::from(q))).collect();
            let y: Vec<Rat> = (0..d)
                .map(|r| fr.basis.iter().zip(&zq).map(|(b, zk)| zk * Rat::from_integer(b[r].clone())).sum())
                .collect();
            pairs.insert((self.chamber_of(&y)?, sub.chamber_of(&zq)?));
        }
        let pairs: Vec<(CeilingVector, CeilingVector)> = pairs.into_iter().collect();
        let mut counterexamples = Vec::new();
        let mut well_defined = true;
        let mut injective = true;
        for (a, (c1, s1)) in pairs.iter().enumerate() {
            for (c2, s2) in &pairs[a + 1..] {
                if c1 == c2 && s1 != s2 {
                    well_defined = false;
                    counterexamples.push(format!("{c1} meets facet chambers {s1} and {s2}"));
                }
                if c1 != c2 && s1 == s2 {
                    injective = false;
                    counterexamples.push(format!("{c1} and {c2} both map to facet chamber {s1}"));
                }
            }
        }
        let mut order_preserved = true;
        for (c1, s1) in &pairs {
            for (c2, s2) in &pairs {
                if self.leq(c1, c2) != sub.leq(s1, s2) {
                    order_preserved = false;
                    counterexamples.push(format!("order differs for {c1}, {c2} vs {s1}, {s2}"));
                }
            }
        }
        let mut codims_preserved = true;
        for (c, s) in &pairs {
            let mut up: Vec<usize> =
                self.enumerate_cells(c)?.iter().filter(|x| !x.omega.contains(&facet)).map(|x| x.codim - 1).collect();
            let mut down: Vec<usize> = sub.enumerate_cells(s)?.iter().map(|x| x.codim).collect();
            up.sort_unstable();
            down.sort_unstable();
            if up != down {
                codims_preserved = false;
                counterexamples.push(format!("cell codims of {c} in H are {up:?}, facet chamber {s} has {down:?}"));
            }
        }
        counterexamples.truncate(8);
        Ok(RestrictionCheck {
            facet,
            restricted_normals: fr.cone.normals().to_vec(),
            pairs,
            well_defined,
            injective,
            order_preserved,
            codims_preserved,
            counterexamples,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_one_sign_is_positive() {
        let a = ToricAlgebra::from_normals_i64(1, &[vec![1]]).unwrap();
        let cells = a.enumerate_cells(&CeilingVector::from_i64(&[0])).unwrap();
        assert_eq!(cells.len(), 2);
        let (zero, interior) = (a.orient(&cells[1]), a.orient(&cells[0]));
        assert_eq!(a.incidence_sign(&zero, &interior), Ok(1));
        assert_eq!(a.incidence_sign(&interior, &zero), Err(Error::NotFacetPair));
    }

    #[test]
    fn open_conic_bumps_active() {
        let a = ToricAlgebra::from_normals_i64(2, &[vec![1, 1], vec![-1, 1]]).unwrap();
        let c = CeilingVector::from_i64(&[1, 0]);
        let cells = a.enumerate_cells(&c).unwrap();
        let by = |omega: &[usize]| cells.iter().find(|x| x.omega == omega).unwrap().clone();
        assert_eq!(a.open_conic(&by(&[0, 1])), c);
        assert_eq!(a.open_conic(&by(&[1])), CeilingVector::from_i64(&[2, 0]));
        assert_eq!(a.open_conic(&by(&[])), CeilingVector::from_i64(&[2, 1]));
    }
}
