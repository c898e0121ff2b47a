//! Chambers of constancy as ceiling vectors, the translation lattice and the
//! enumeration of isomorphism classes.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::OnceLock;

use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::cone::{ConeSpec, IntVec};
use crate::error::{Error, Result};
use crate::ratgeom::{dot_q, lattice_solve, rat_vec, row_hnf, Int, IntMat, LinSystem, Rat, Relation};

/// Integer vector `c` with `c_i = ceil(<v, n_i>)` for `v` in the chamber.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CeilingVector(pub IntVec);

impl CeilingVector {
    pub fn zero(t: usize) -> Self {
        CeilingVector(vec![Int::zero(); t])
    }

    pub fn from_i64(v: &[i64]) -> Self {
        CeilingVector(v.iter().map(|&x| Int::from(x)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[Int] {
        &self.0
    }

    pub fn add(&self, other: &[Int]) -> Self {
        CeilingVector(self.0.iter().zip(other).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &CeilingVector) -> Self {
        CeilingVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    /// `self + e_i` (or `- e_i` when `delta` is negative).
    pub fn bumped(&self, i: usize, delta: i64) -> Self {
        let mut v = self.0.clone();
        v[i] += delta;
        CeilingVector(v)
    }

    /// Entrywise `self >= other`.
    pub fn dominates(&self, other: &CeilingVector) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a >= b)
    }

    pub fn to_i64(&self) -> Option<Vec<i64>> {
        self.0.iter().map(ToPrimitive::to_i64).collect()
    }
}

impl fmt::Display for CeilingVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl Serialize for CeilingVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        crate::io::int_list_value(&self.0).serialize(s)
    }
}

/// `L = N̂(Z^d) ⊆ Z^t` in row Hermite normal form.
#[derive(Clone, Debug)]
pub struct TranslationLattice {
    nhat: IntMat,
    hnf: IntMat,
    pivots: Vec<usize>,
}

impl TranslationLattice {
    pub fn new(cone: &ConeSpec) -> Self {
        let nhat = cone.normal_matrix();
        let hnf = row_hnf(&nhat.transpose());
        let pivots = hnf.rows().map(|r| r.iter().position(|x| !x.is_zero()).unwrap()).collect();
        TranslationLattice { nhat, hnf, pivots }
    }

    /// The t x d matrix of N̂.
    pub fn map_matrix(&self) -> &IntMat {
        &self.nhat
    }

    pub fn hnf(&self) -> &IntMat {
        &self.hnf
    }

    pub fn rank(&self) -> usize {
        self.hnf.nrows()
    }

    /// N̂ m.
    pub fn apply(&self, m: &[Int]) -> IntVec {
        self.nhat.rows().map(|n| n.iter().zip(m).map(|(a, b)| a * b).sum()).collect()
    }

    /// Coset representative of `c + L` reduced against the HNF pivots.
    pub fn reduce(&self, c: &[Int]) -> IntVec {
        let mut v = c.to_vec();
        for (row, &p) in self.hnf.rows().zip(&self.pivots) {
            let q = v[p].div_floor(&row[p]);
            if !q.is_zero() {
                for (x, h) in v.iter_mut().zip(row) {
                    *x -= &q * h;
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[Int]) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }

    /// Product of HNF pivots when L has full rank t, i.e. |Z^t / L|; `None` if infinite.
    pub fn index(&self) -> Option<Int> {
        if self.rank() < self.nhat.nrows() {
            return None;
        }
        Some(self.hnf.rows().zip(&self.pivots).map(|(r, &p)| r[p].clone()).product())
    }
}

/// Tunable limits.
#[derive(Clone, Debug)]
pub struct Config {
    /// Largest number of normals accepted (cell enumeration is exponential in it).
    pub max_normals: usize,
    /// Safety cap for the minimal complete Frobenius search.
    pub frobenius_cap: u64,
}

impl Default for Config {
    fn default() -> Self {
        Config { max_normals: 12, frobenius_cap: 64 }
    }
}

/// A toric algebra given by its cone, with the derived lattice data and a
/// lazily computed class list.
#[derive(Debug)]
pub struct ToricAlgebra {
    cone: ConeSpec,
    lattice: TranslationLattice,
    config: Config,
    classes: OnceLock<ClassList>,
}

#[derive(Clone, Debug)]
struct ClassList {
    reps: Vec<CeilingVector>,
    index: BTreeMap<CeilingVector, usize>,
}

impl Clone for ToricAlgebra {
    fn clone(&self) -> Self {
        let classes = OnceLock::new();
        if let Some(c) = self.classes.get() {
            let _ = classes.set(c.clone());
        }
        ToricAlgebra { cone: self.cone.clone(), lattice: self.lattice.clone(), config: self.config.clone(), classes }
    }
}

impl ToricAlgebra {
    pub fn new(cone: ConeSpec) -> Result<Self> {
        Self::with_config(cone, Config::default())
    }

    pub fn with_config(cone: ConeSpec, config: Config) -> Result<Self> {
        if cone.num_normals() > config.max_normals {
            return Err(Error::Unsupported(format!(
                "{} normals exceeds the configured limit of {}",
                cone.num_normals(),
                config.max_normals
            )));
        }
        let lattice = TranslationLattice::new(&cone);
        Ok(ToricAlgebra { cone, lattice, config, classes: OnceLock::new() })
    }

    /// Shorthand for `ConeSpec::from_normals` with small integers.
    pub fn from_normals_i64(rank: usize, normals: &[Vec<i64>]) -> Result<Self> {
        let normals = normals.iter().map(|n| n.iter().map(|&x| Int::from(x)).collect()).collect();
        Self::new(ConeSpec::from_normals(rank, normals)?)
    }

    pub fn cone(&self) -> &ConeSpec {
        &self.cone
    }

    pub fn lattice(&self) -> &TranslationLattice {
        &self.lattice
    }

    pub fn config(&self) -> &Config {
        &self.config
    }

    pub fn rank(&self) -> usize {
        self.cone.rank()
    }

    pub fn num_normals(&self) -> usize {
        self.cone.num_normals()
    }

    pub(crate) fn check_len(&self, c: &CeilingVector) -> Result<()> {
        if c.len() != self.num_normals() {
            return Err(Error::DimensionMismatch { expected: self.num_normals(), found: c.len() });
        }
        Ok(())
    }

    pub fn require_feasible(&self, c: &CeilingVector) -> Result<()> {
        self.check_len(c)?;
        if !self.is_feasible(c) {
            return Err(Error::InfeasibleChamber(c.to_string()));
        }
        Ok(())
    }

    pub fn chamber_of(&self, v: &[Rat]) -> Result<CeilingVector> {
        if v.len() != self.rank() {
            return Err(Error::DimensionMismatch { expected: self.rank(), found: v.len() });
        }
        Ok(CeilingVector(self.cone.normals().iter().map(|n| dot_q(v, n).ceil().to_integer()).collect()))
    }

    /// The half-open system `c_i - 1 < <x, n_i> <= c_i`.
    pub fn chamber_system(&self, c: &CeilingVector) -> LinSystem {
        let mut sys = LinSystem::new(self.rank());
        for (n, ci) in self.cone.normals().iter().zip(&c.0) {
            let a = rat_vec(n);
            sys.push(a.clone(), Relation::Le, Rat::from_integer(ci.clone()));
            sys.push_ge(a, true, Rat::from_integer(ci - Int::one()));
        }
        sys
    }

    pub fn is_feasible(&self, c: &CeilingVector) -> bool {
        c.len() == self.num_normals() && self.chamber_system(c).is_feasible()
    }

    /// A rational point of the chamber.
    pub fn chamber_witness(&self, c: &CeilingVector) -> Option<Vec<Rat>> {
        if c.len() != self.num_normals() {
            return None;
        }
        self.chamber_system(c).find_point()
    }

    pub fn canonical_class(&self, c: &CeilingVector) -> Result<CeilingVector> {
        self.require_feasible(c)?;
        Ok(self.canonical_unchecked(c))
    }

    pub(crate) fn canonical_unchecked(&self, c: &CeilingVector) -> CeilingVector {
        CeilingVector(self.lattice.reduce(&c.0))
    }

    /// All isomorphism classes as canonical representatives: the free class
    /// first, the others in lexicographic order.
    pub fn enumerate_classes(&self) -> &[CeilingVector] {
        &self.class_list().reps
    }

    fn class_list(&self) -> &ClassList {
        self.classes.get_or_init(|| {
            let zero = self.canonical_unchecked(&CeilingVector::zero(self.num_normals()));
            let mut reps = vec![zero.clone()];
            reps.extend(self.bfs_classes().into_iter().filter(|c| *c != zero));
            let index = reps.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect();
            ClassList { reps, index }
        })
    }

    fn bfs_classes(&self) -> Vec<CeilingVector> {
        let t = self.num_normals();
        let start = self.canonical_unchecked(&CeilingVector::zero(t));
        let mut seen: BTreeSet<CeilingVector> = BTreeSet::new();
        seen.insert(start.clone());
        let mut frontier = vec![start];
        while !frontier.is_empty() {
            let candidates: BTreeSet<CeilingVector> =
                frontier.iter().flat_map(|c| (0..t).flat_map(move |i| [c.bumped(i, 1), c.bumped(i, -1)])).collect();
            let found: BTreeSet<CeilingVector> = candidates
                .into_par_iter()
                .filter(|c| self.is_feasible(c))
                .map(|c| self.canonical_unchecked(&c))
                .collect();
            frontier = found.into_iter().filter(|c| seen.insert(c.clone())).collect();
        }
        seen.into_iter().collect()
    }

    /// Index of the class of a feasible `c` in `enumerate_classes()`.
    pub fn class_index(&self, c: &CeilingVector) -> Result<usize> {
        let k = self.canonical_class(c)?;
        self.class_list()
            .index
            .get(&k)
            .copied()
            .ok_or_else(|| Error::Invariant(format!("class of {c} missing from the enumeration")))
    }

    pub(crate) fn class_index_unchecked(&self, c: &CeilingVector) -> Option<usize> {
        self.class_list().index.get(&self.canonical_unchecked(c)).copied()
    }

    /// Index of the class of R (always 0).
    pub fn free_class_index(&self) -> usize {
        0
    }

    /// `A<i>` label of a class index.
    pub fn class_label(&self, i: usize) -> String {
        format!("A{i}")
    }

    /// Independent class count: classify `chamber_of(v)` over the grid
    /// `{k/q : 0 <= k < q}^d` with `q = 1 + max ||n_i||_1`.
    pub fn grid_oracle_class_count(&self) -> usize {
        let q = 1 + self
            .cone
            .normals()
            .iter()
            .map(|n| n.iter().map(|x| x.magnitude().clone()).sum::<num_bigint::BigUint>())
            .max()
            .unwrap()
            .to_u64()
            .unwrap();
        let d = self.rank();
        let total = q.pow(d as u32);
        let found: BTreeSet<CeilingVector> = (0..total)
            .into_par_iter()
            .map(|mut idx| {
                let mut v = Vec::with_capacity(d);
                for _ in 0..d {
                    v.push(Rat::new(Int::from(idx % q), Int::from(q)));
                    idx /= q;
                }
                let c = self.chamber_of(&v).expect("grid point has rank entries");
                self.canonical_unchecked(&c)
            })
            .collect();
        found.len()
    }

    /// `A_c ⊆ A_c'`, i.e. `c >= c'` entrywise.
    pub fn leq(&self, c: &CeilingVector, c2: &CeilingVector) -> bool {
        c.dominates(c2)
    }

    pub fn degree(&self, c: &CeilingVector) -> Int {
        -c.0.iter().sum::<Int>()
    }

    /// Chambers sharing a genuine wall: they differ by ±1 in one coordinate
    /// and the wall, with all other constraints strict, is nonempty.
    pub fn is_adjacent(&self, c: &CeilingVector, c2: &CeilingVector) -> bool {
        if c.len() != self.num_normals() || c2.len() != self.num_normals() {
            return false;
        }
        let diff: Vec<usize> = (0..c.len()).filter(|&i| c.0[i] != c2.0[i]).collect();
        let [i] = diff.as_slice() else { return false };
        let i = *i;
        if (&c.0[i] - &c2.0[i]).magnitude() != &num_bigint::BigUint::one() {
            return false;
        }
        let wall = c.0[i].clone().min(c2.0[i].clone());
        let mut sys = LinSystem::new(self.rank());
        for (j, (n, cj)) in self.cone.normals().iter().zip(&c.0).enumerate() {
            let a = rat_vec(n);
            if j == i {
                sys.push(a, Relation::Eq, Rat::from_integer(wall.clone()));
            } else {
                sys.push(a.clone(), Relation::Lt, Rat::from_integer(cj.clone()));
                sys.push_ge(a, true, Rat::from_integer(cj - Int::one()));
            }
        }
        sys.is_feasible()
    }

    /// The unique `m` with `N̂ m = c - c'`, when it is integral.
    pub fn iso_witness(&self, c: &CeilingVector, c2: &CeilingVector) -> Option<IntVec> {
        if c.len() != self.num_normals() || c2.len() != self.num_normals() {
            return None;
        }
        lattice_solve(self.lattice.map_matrix(), &c.sub(c2).0)
    }
}
