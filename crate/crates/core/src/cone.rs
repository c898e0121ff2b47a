//! Cone data: the primitive inward facet normals of a full-dimensional pointed
//! cone, conversions between presentations and restriction to facets.

use std::fmt::Write as _;

use num_traits::{One, Signed, Zero};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::ratgeom::{
    column_hnf_with_transform, dot_z, is_primitive, primitive, rank_z, rat_vec, Int, IntMat, LinSystem, QMat, Rat,
    Relation,
};

pub type IntVec = Vec<Int>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeSpec {
    rank: usize,
    normals: Vec<IntVec>,
    generators: Vec<IntVec>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ConeValidation {
    pub pointed: bool,
    pub full_dimensional: bool,
    pub simplicial: bool,
}

/// Result of restricting to the facet `normal . x = 0`.
#[derive(Clone, Debug)]
pub struct FacetRestriction {
    pub facet: usize,
    pub cone: ConeSpec,
    /// Lattice basis of M ∩ H, as vectors in M.
    pub basis: Vec<IntVec>,
    /// For every original normal, its functional on the basis (not primitivised).
    pub restricted: Vec<IntVec>,
    /// Original index of each normal of the restricted cone.
    pub source: Vec<usize>,
}

impl ConeSpec {
    /// Builds a cone from its facet normals, rejecting anything that is not
    /// already primitive, irredundant, pointed and full-dimensional.
    pub fn from_normals(rank: usize, normals: Vec<IntVec>) -> Result<Self> {
        check_shape(rank, &normals)?;
        if let Some(i) = normals.iter().position(|n| !is_primitive(n)) {
            return Err(Error::Input(format!("normal {} is not primitive", i + 1)));
        }
        for i in 0..normals.len() {
            if normals[..i].contains(&normals[i]) {
                return Err(Error::Input(format!("normal {} is repeated", i + 1)));
            }
        }
        if rank_z(&as_mat(rank, &normals)) < rank {
            return Err(Error::NotPointed);
        }
        if !interior_feasible(rank, &normals) {
            return Err(Error::NotFullDimensional);
        }
        if let Some(i) = (0..normals.len()).find(|&i| is_redundant(rank, &normals, i)) {
            return Err(Error::Input(format!("normal {} is redundant", i + 1)));
        }
        let generators = extreme_rays(rank, &normals);
        Ok(ConeSpec { rank, normals, generators })
    }

    /// Builds a cone from generators of the dual cone. Rays are primitivised,
    /// duplicates and redundant rays are dropped, survivors keep input order.
    pub fn from_dual_rays(rank: usize, rays: Vec<IntVec>) -> Result<Self> {
        check_shape(rank, &rays)?;
        if rays.iter().all(|r| r.iter().all(Zero::is_zero)) {
            return Err(Error::Input("all rays are zero".into()));
        }
        if let Some(i) = rays.iter().position(|r| r.iter().all(Zero::is_zero)) {
            return Err(Error::Input(format!("ray {} is zero", i + 1)));
        }
        let normals = normalise_rays(rank, rays.iter().map(|r| primitive(r)).collect());
        if rank_z(&as_mat(rank, &normals)) < rank {
            return Err(Error::DualNotPointed);
        }
        Self::from_normals(rank, normals)
    }

    /// Builds a cone from generators of C by the double description method.
    /// Normals are returned in decreasing lexicographic order.
    pub fn from_primal_rays(rank: usize, rays: Vec<IntVec>) -> Result<Self> {
        check_shape(rank, &rays)?;
        if rays.is_empty() || rank_z(&as_mat(rank, &rays)) < rank {
            return Err(Error::NotFullDimensional);
        }
        let mut normals = extreme_rays(rank, &rays);
        normals.sort_by(|a, b| b.cmp(a));
        Self::from_normals(rank, normals)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn normals(&self) -> &[IntVec] {
        &self.normals
    }

    pub fn num_normals(&self) -> usize {
        self.normals.len()
    }

    /// Primitive extreme rays of C.
    pub fn generators(&self) -> &[IntVec] {
        &self.generators
    }

    /// The map N̂ : Z^d → Z^t as a t x d matrix (rows are the normals).
    pub fn normal_matrix(&self) -> IntMat {
        as_mat(self.rank, &self.normals)
    }

    pub fn validate(&self) -> ConeValidation {
        validate_normals(self.rank, &self.normals)
    }

    pub fn is_simplicial(&self) -> bool {
        self.validate().simplicial
    }

    /// SHA-256 of the rank and the ordered normals; changes if normals are reordered.
    pub fn content_hash(&self) -> String {
        let mut s = format!("rank={}", self.rank);
        for n in &self.normals {
            s.push(';');
            let parts: Vec<String> = n.iter().map(ToString::to_string).collect();
            s.push_str(&parts.join(","));
        }
        let digest = Sha256::digest(s.as_bytes());
        let mut hex = String::with_capacity(64);
        for b in digest {
            let _ = write!(hex, "{b:02x}");
        }
        hex
    }

    /// Is `m` in C (pairs non-negatively with every normal)?
    pub fn contains(&self, m: &[Int]) -> bool {
        self.normals.iter().all(|n| !dot_z(n, m).is_negative())
    }

    pub fn restrict_to_facet(&self, i: usize) -> Result<ConeSpec> {
        Ok(self.facet_restriction(i)?.cone)
    }

    pub fn facet_restriction(&self, i: usize) -> Result<FacetRestriction> {
        let t = self.normals.len();
        if i >= t {
            return Err(Error::InvalidIndex { index: i, len: t });
        }
        if self.rank < 2 {
            return Err(Error::Unsupported("facet restriction of a rank-one cone".into()));
        }
        let d = self.rank;
        // n_i U = (1, 0, ..., 0) with U unimodular; the other columns span ker n_i.
        let row = IntMat::from_rows(d, vec![self.normals[i].clone()]);
        let (_, u) = column_hnf_with_transform(&row);
        let basis: Vec<IntVec> = (1..d).map(|k| (0..d).map(|r| u[(r, k)].clone()).collect()).collect();
        let restricted: Vec<IntVec> =
            self.normals.iter().map(|n| basis.iter().map(|b| dot_z(n, b)).collect()).collect();
        let mut kept: Vec<(usize, IntVec)> = Vec::new();
        for (j, f) in restricted.iter().enumerate() {
            if j == i || f.iter().all(Zero::is_zero) {
                continue;
            }
            let p = primitive(f);
            if !kept.iter().any(|(_, q)| *q == p) {
                kept.push((j, p));
            }
        }
        let all: Vec<IntVec> = kept.iter().map(|(_, p)| p.clone()).collect();
        let survivors: Vec<(usize, IntVec)> =
            kept.into_iter().enumerate().filter(|(k, _)| !is_redundant(d - 1, &all, *k)).map(|(_, x)| x).collect();
        let source = survivors.iter().map(|(j, _)| *j).collect();
        let cone = ConeSpec::from_normals(d - 1, survivors.into_iter().map(|(_, p)| p).collect())?;
        Ok(FacetRestriction { facet: i, cone, basis, restricted, source })
    }
}

pub fn validate_normals(rank: usize, normals: &[IntVec]) -> ConeValidation {
    let r = rank_z(&as_mat(rank, normals));
    let pointed = r == rank;
    ConeValidation {
        pointed,
        full_dimensional: interior_feasible(rank, normals),
        simplicial: pointed && normals.len() == rank,
    }
}

fn check_shape(rank: usize, vs: &[IntVec]) -> Result<()> {
    if rank == 0 {
        return Err(Error::Input("rank must be positive".into()));
    }
    if vs.is_empty() {
        return Err(Error::Input("no vectors given".into()));
    }
    for v in vs {
        if v.len() != rank {
            return Err(Error::DimensionMismatch { expected: rank, found: v.len() });
        }
    }
    Ok(())
}

fn as_mat(rank: usize, vs: &[IntVec]) -> IntMat {
    IntMat::from_rows(rank, vs.to_vec())
}

/// {x : <x, n_i> >= 1 for all i} is nonempty.
fn interior_feasible(rank: usize, normals: &[IntVec]) -> bool {
    let mut sys = LinSystem::new(rank);
    for n in normals {
        sys.push_ge(rat_vec(n), false, Rat::one());
    }
    sys.is_feasible()
}

/// `vs[i]` lies in the cone spanned by the others (Farkas: no x with
/// <x, vs[i]> < 0 and <x, vs[j]> >= 0 for j != i).
fn is_redundant(rank: usize, vs: &[IntVec], i: usize) -> bool {
    let mut sys = LinSystem::new(rank);
    sys.push(rat_vec(&vs[i]), Relation::Lt, Rat::zero());
    for (j, v) in vs.iter().enumerate() {
        if j != i {
            sys.push_ge(rat_vec(v), false, Rat::zero());
        }
    }
    !sys.is_feasible()
}

fn normalise_rays(rank: usize, rays: Vec<IntVec>) -> Vec<IntVec> {
    let mut uniq: Vec<IntVec> = Vec::new();
    for r in rays {
        if !uniq.contains(&r) {
            uniq.push(r);
        }
    }
    (0..uniq.len()).filter(|&i| !is_redundant(rank, &uniq, i)).map(|i| uniq[i].clone()).collect()
}

/// Extreme rays of the pointed cone {y : <g, y> >= 0 for all g in `cons`}
/// by double description. `cons` must span.
pub fn extreme_rays(rank: usize, cons: &[IntVec]) -> Vec<IntVec> {
    let d = rank;
    // Greedy simplicial start.
    let mut basis: Vec<usize> = Vec::new();
    for (i, _) in cons.iter().enumerate() {
        let mut trial: Vec<IntVec> = basis.iter().map(|&b| cons[b].clone()).collect();
        trial.push(cons[i].clone());
        if rank_z(&as_mat(d, &trial)) == trial.len() {
            basis.push(i);
        }
        if basis.len() == d {
            break;
        }
    }
    assert_eq!(basis.len(), d, "constraints do not span");
    // Columns of B^{-1}: ray j is dual to basis constraint j.
    let b = QMat::from_rows(d, basis.iter().map(|&i| rat_vec(&cons[i])).collect());
    let mut rays: Vec<(IntVec, Vec<bool>)> = Vec::new();
    for j in 0..d {
        let mut e = vec![Rat::zero(); d];
        e[j] = Rat::one();
        let x = crate::ratgeom::solve_q(&b, &e).expect("basis is invertible");
        let ray = crate::ratgeom::primitive_from_rational(&x);
        let zeros = (0..cons.len()).map(|k| basis.contains(&k) && basis[j] != k).collect();
        rays.push((ray, zeros));
    }
    let mut processed: Vec<bool> = (0..cons.len()).map(|k| basis.contains(&k)).collect();
    for k in 0..cons.len() {
        if processed[k] {
            continue;
        }
        let g = &cons[k];
        let vals: Vec<Int> = rays.iter().map(|(r, _)| dot_z(g, r)).collect();
        let mut next: Vec<(IntVec, Vec<bool>)> = Vec::new();
        for (idx, (r, z)) in rays.iter().enumerate() {
            if !vals[idx].is_negative() {
                let mut z = z.clone();
                z[k] = vals[idx].is_zero();
                next.push((r.clone(), z));
            }
        }
        for p in 0..rays.len() {
            if !vals[p].is_positive() {
                continue;
            }
            for n in 0..rays.len() {
                if !vals[n].is_negative() {
                    continue;
                }
                let common: Vec<bool> = rays[p].1.iter().zip(&rays[n].1).map(|(a, b)| *a && *b).collect();
                if common.iter().filter(|x| **x).count() + 2 < d {
                    continue;
                }
                let blocked = rays
                    .iter()
                    .enumerate()
                    .any(|(o, (_, zo))| o != p && o != n && common.iter().zip(zo).all(|(c, z)| !*c || *z));
                if blocked {
                    continue;
                }
                let a = &vals[p];
                let bneg = -&vals[n];
                let combo: IntVec = rays[p].0.iter().zip(&rays[n].0).map(|(x, y)| x * &bneg + y * a).collect();
                let mut z = common;
                z[k] = true;
                next.push((primitive(&combo), z));
            }
        }
        processed[k] = true;
        rays = next;
    }
    rays.into_iter().map(|(r, _)| r).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratgeom::int_vec;

    fn vs(rows: &[&[i64]]) -> Vec<IntVec> {
        rows.iter().map(|r| int_vec(r)).collect()
    }

    #[test]
    fn dual_rays_drop_redundant() {
        let c = ConeSpec::from_dual_rays(2, vs(&[&[1, 0], &[1, 1], &[0, 1]])).unwrap();
        assert_eq!(c.normals(), vs(&[&[1, 0], &[0, 1]]).as_slice());
        let c = ConeSpec::from_dual_rays(2, vs(&[&[2, 2], &[-1, 1], &[1, 1]])).unwrap();
        assert_eq!(c.normals(), vs(&[&[1, 1], &[-1, 1]]).as_slice());
    }

    #[test]
    fn dual_rays_errors() {
        assert_eq!(ConeSpec::from_dual_rays(2, vs(&[&[1, 0], &[2, 0]])), Err(Error::DualNotPointed));
        assert!(matches!(ConeSpec::from_dual_rays(2, vs(&[&[0, 0]])), Err(Error::Input(_))));
    }

    #[test]
    fn primal_square() {
        let c = ConeSpec::from_primal_rays(3, vs(&[&[0, 0, 1], &[1, 0, 1], &[0, 1, 1], &[1, 1, 1]])).unwrap();
        let mut got = c.normals().to_vec();
        got.sort();
        let mut want = vs(&[&[1, 0, 0], &[0, 1, 0], &[-1, 0, 1], &[0, -1, 1]]);
        want.sort();
        assert_eq!(got, want);
        assert_eq!(c.generators().len(), 4);
    }

    #[test]
    fn rank_one() {
        let c = ConeSpec::from_normals(1, vs(&[&[1]])).unwrap();
        assert!(c.is_simplicial());
        assert_eq!(c.generators(), vs(&[&[1]]).as_slice());
        assert!(c.restrict_to_facet(0).is_err());
    }

    #[test]
    fn hash_depends_on_order() {
        let a = ConeSpec::from_normals(2, vs(&[&[1, 1], &[-1, 1]])).unwrap();
        let b = ConeSpec::from_normals(2, vs(&[&[-1, 1], &[1, 1]])).unwrap();
        assert_ne!(a.content_hash(), b.content_hash());
        assert_eq!(a.content_hash().len(), 64);
    }
}
