//! Conic chain complexes, their graded pieces and homology, projective
//! dimensions, Ext counts and the acyclicity check on finite windows.

mod resolution;

use std::collections::BTreeMap;

use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::Serialize;

use crate::cells::Cell;
use crate::chambers::{CeilingVector, ToricAlgebra};
use crate::cone::IntVec;
use crate::error::{Error, Result};
use crate::homs::box_points;
use crate::ratgeom::{rank_q, smith_invariants, Int, IntMat, QMat};

pub use resolution::{NccrVerdict, ResolutionReport};

#[derive(Clone, Debug, Serialize)]
pub struct ComplexTerm {
    pub cell: Cell,
    pub open_conic: CeilingVector,
}

/// `K^•` of a chamber: degree `i` collects the open conic modules of the
/// codim-`i` cells; `differentials[i]` maps degree `i+1` to degree `i`.
#[derive(Clone, Debug)]
pub struct ConicComplex {
    pub chamber: CeilingVector,
    pub terms: Vec<Vec<ComplexTerm>>,
    pub differentials: Vec<IntMat>,
}

impl ConicComplex {
    pub fn length(&self) -> usize {
        self.terms.len() - 1
    }

    pub fn to_module_complex(&self) -> ModuleComplex {
        ModuleComplex {
            terms: self.terms.iter().map(|ts| ts.iter().map(|t| t.open_conic.clone()).collect()).collect(),
            maps: self.differentials.iter().map(IntMat::to_rational).collect(),
        }
    }
}

/// A complex of conic modules whose maps are degree-zero scalar matrices;
/// `maps[i]` goes from `terms[i+1]` to `terms[i]`.
#[derive(Clone, Debug, PartialEq)]
pub struct ModuleComplex {
    pub terms: Vec<Vec<CeilingVector>>,
    pub maps: Vec<QMat>,
}

impl ModuleComplex {
    /// Highest nonzero degree.
    pub fn length(&self) -> usize {
        self.terms.iter().rposition(|t| !t.is_empty()).unwrap_or(0)
    }

    pub fn check_square_zero(&self) -> Result<()> {
        for i in 1..self.maps.len() {
            if !self.maps[i - 1].mul(&self.maps[i]).is_zero() {
                return Err(Error::Invariant(format!("d∘d ≠ 0 at degree {}", i + 1)));
            }
        }
        Ok(())
    }

    /// `Hom(A_{c'}, -)` in multidegree `m`: keeps summands `e` with `c' + N̂m >= e`.
    pub fn graded_piece(&self, alg: &ToricAlgebra, c2: &CeilingVector, m: &[Int]) -> ScalarComplex {
        let shifted = c2.add(&alg.lattice().apply(m));
        let keep: Vec<Vec<usize>> =
            self.terms.iter().map(|ts| (0..ts.len()).filter(|&k| alg.leq(&shifted, &ts[k])).collect()).collect();
        let maps = (0..self.maps.len())
            .map(|i| {
                let (rows, cols) = (&keep[i], &keep[i + 1]);
                let mut q = QMat::zeros(rows.len(), cols.len());
                for (a, &r) in rows.iter().enumerate() {
                    for (b, &c) in cols.iter().enumerate() {
                        q[(a, b)] = self.maps[i][(r, c)].clone();
                    }
                }
                q
            })
            .collect();
        ScalarComplex { dims: keep.iter().map(Vec::len).collect(), maps }
    }

    /// Class multiplicities per degree.
    pub fn class_shape(&self, alg: &ToricAlgebra) -> Vec<BTreeMap<usize, usize>> {
        self.terms[..=self.length()]
            .iter()
            .map(|ts| {
                let mut m = BTreeMap::new();
                for c in ts {
                    let k = alg.class_index_unchecked(c).expect("terms are feasible");
                    *m.entry(k).or_insert(0) += 1;
                }
                m
            })
            .collect()
    }
}

/// A finite complex of Q-vector spaces; `maps[i]` goes from degree `i+1` to `i`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScalarComplex {
    pub dims: Vec<usize>,
    #[serde(skip)]
    pub maps: Vec<QMat>,
}

impl ScalarComplex {
    pub fn new(dims: Vec<usize>, maps: Vec<QMat>) -> Result<Self> {
        if maps.len() + 1 != dims.len().max(1) {
            return Err(Error::Input("a complex with n terms needs n-1 maps".into()));
        }
        for (i, m) in maps.iter().enumerate() {
            if m.nrows() != dims[i] || m.ncols() != dims[i + 1] {
                return Err(Error::Input(format!("map {} has the wrong shape", i + 1)));
            }
        }
        Ok(ScalarComplex { dims, maps })
    }

    pub fn homology_ranks(&self) -> Vec<usize> {
        let ranks: Vec<usize> = self.maps.iter().map(rank_q).collect();
        (0..self.dims.len())
            .map(|i| {
                let out = if i == 0 { 0 } else { ranks[i - 1] };
                let inc = ranks.get(i).copied().unwrap_or(0);
                self.dims[i] - out - inc
            })
            .collect()
    }
}

pub fn homology_ranks(s: &ScalarComplex) -> Vec<usize> {
    s.homology_ranks()
}

/// Box of lattice points `lo_j <= m_j <= hi_j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Window {
    pub lo: Vec<i64>,
    pub hi: Vec<i64>,
}

impl Window {
    pub fn cube(d: usize, radius: i64) -> Self {
        Window { lo: vec![-radius; d], hi: vec![radius; d] }
    }

    /// `|m_j| <= 2 (1 + max_i |c_i - c'_i|)`.
    pub fn default_for(d: usize, c: &CeilingVector, c2: &CeilingVector) -> Self {
        let spread = c.sub(c2).0.iter().map(|x| x.magnitude().to_i64().unwrap_or(i64::MAX / 4)).max().unwrap_or(0);
        Self::cube(d, 2 * (1 + spread))
    }

    pub fn points(&self) -> Vec<IntVec> {
        box_points(&self.lo.iter().copied().zip(self.hi.iter().copied()).collect::<Vec<_>>())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub m: Vec<i64>,
    pub ranks: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AcyclicityReport {
    pub chamber: CeilingVector,
    pub other: CeilingVector,
    pub window: Window,
    pub points_checked: usize,
    /// Multidegrees with `H_0 = 1`.
    pub degree_zero_hits: Vec<Vec<i64>>,
    pub violations: Vec<Violation>,
}

impl AcyclicityReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

fn small(m: &[Int]) -> Vec<i64> {
    m.iter().map(|x| x.to_i64().unwrap_or(i64::MAX)).collect()
}

/// Checks that `Hom(A_{c'}, K)` in each multidegree of the window has homology
/// only in degree zero, of rank one, exactly where `c' + N̂m = target`.
pub(crate) fn check_acyclic(
    alg: &ToricAlgebra,
    k: &ModuleComplex,
    target: &CeilingVector,
    c2: &CeilingVector,
    window: &Window,
) -> AcyclicityReport {
    let points = window.points();
    let results: Vec<(IntVec, Vec<usize>, bool)> = points
        .par_iter()
        .map(|m| {
            let ranks = k.graded_piece(alg, c2, m).homology_ranks();
            let expect_hit = c2.add(&alg.lattice().apply(m)) == *target;
            (m.clone(), ranks, expect_hit)
        })
        .collect();
    let mut hits = Vec::new();
    let mut violations = Vec::new();
    for (m, ranks, expect_hit) in results {
        let ok = ranks.iter().enumerate().all(|(i, &r)| r == usize::from(i == 0 && expect_hit));
        if ranks.first() == Some(&1) {
            hits.push(small(&m));
        }
        if !ok {
            violations.push(Violation { m: small(&m), ranks });
        }
    }
    AcyclicityReport {
        chamber: target.clone(),
        other: c2.clone(),
        window: window.clone(),
        points_checked: points.len(),
        degree_zero_hits: hits,
        violations,
    }
}

impl ToricAlgebra {
    pub fn conic_complex(&self, c: &CeilingVector) -> Result<ConicComplex> {
        let cells = self.enumerate_cells(c)?;
        let len = cells.iter().map(|x| x.codim).max().unwrap_or(0);
        let mut terms: Vec<Vec<ComplexTerm>> = vec![Vec::new(); len + 1];
        for cell in cells {
            let open_conic = self.open_conic(&cell);
            terms[cell.codim].push(ComplexTerm { cell, open_conic });
        }
        let oriented: Vec<Vec<_>> = terms.iter().map(|ts| ts.iter().map(|t| self.orient(&t.cell)).collect()).collect();
        let mut differentials = Vec::with_capacity(len);
        for i in 0..len {
            let mut d = IntMat::zeros(terms[i].len(), terms[i + 1].len());
            for (a, outer) in oriented[i].iter().enumerate() {
                for (b, inner) in oriented[i + 1].iter().enumerate() {
                    if self.is_facet_pair(&inner.cell, &outer.cell)? {
                        if !self.leq(&terms[i + 1][b].open_conic, &terms[i][a].open_conic) {
                            return Err(Error::Invariant("open conic of a boundary cell is not contained".into()));
                        }
                        d[(a, b)] = Int::from(self.incidence_sign(inner, outer)?);
                    }
                }
            }
            differentials.push(d);
        }
        let k = ConicComplex { chamber: c.clone(), terms, differentials };
        k.to_module_complex().check_square_zero()?;
        Ok(k)
    }

    pub fn graded_piece(&self, k: &ConicComplex, c2: &CeilingVector, m: &[Int]) -> Result<ScalarComplex> {
        self.require_feasible(c2)?;
        if m.len() != self.rank() {
            return Err(Error::DimensionMismatch { expected: self.rank(), found: m.len() });
        }
        Ok(k.to_module_complex().graded_piece(self, c2, m))
    }

    pub fn verify_acyclicity(
        &self,
        c: &CeilingVector,
        c2: &CeilingVector,
        window: &Window,
    ) -> Result<AcyclicityReport> {
        self.require_feasible(c2)?;
        if window.lo.len() != self.rank() || window.hi.len() != self.rank() {
            return Err(Error::DimensionMismatch { expected: self.rank(), found: window.lo.len() });
        }
        let k = self.conic_complex(c)?.to_module_complex();
        Ok(check_acyclic(self, &k, c, c2, window))
    }

    /// Acyclicity over all ordered pairs of class representatives, default windows.
    pub fn verify_acyclicity_all(&self, radius: Option<i64>) -> Result<Vec<AcyclicityReport>> {
        let classes = self.enumerate_classes();
        let mut out = Vec::new();
        for c in classes {
            let k = self.conic_complex(c)?.to_module_complex();
            for c2 in classes {
                let w = match radius {
                    Some(r) => Window::cube(self.rank(), r),
                    None => Window::default_for(self.rank(), c, c2),
                };
                out.push(check_acyclic(self, &k, c, c2, &w));
            }
        }
        Ok(out)
    }

    pub fn pdim_simple(&self, c: &CeilingVector) -> Result<usize> {
        Ok(self.enumerate_cells(c)?.iter().map(|x| x.codim).max().unwrap_or(0))
    }

    pub fn global_dimension(&self) -> Result<usize> {
        let mut g = 0;
        for c in self.enumerate_classes() {
            g = g.max(self.pdim_simple(c)?);
        }
        if g != self.rank() {
            return Err(Error::Invariant(format!("global dimension {g} differs from rank {}", self.rank())));
        }
        Ok(g)
    }

    /// Entry `i`: codim-`i` cells of `c` whose open conic module is isomorphic to `A_{c'}`.
    pub fn ext_dims(&self, c: &CeilingVector, c2: &CeilingVector) -> Result<Vec<usize>> {
        let target = self.canonical_class(c2)?;
        let cells = self.enumerate_cells(c)?;
        let mut out = vec![0; cells.iter().map(|x| x.codim).max().unwrap_or(0) + 1];
        for cell in &cells {
            if self.canonical_unchecked(&self.open_conic(cell)) == target {
                out[cell.codim] += 1;
            }
        }
        Ok(out)
    }

    /// Elementary divisors of each differential of `K`.
    pub fn smith_invariants(&self, c: &CeilingVector) -> Result<Vec<Vec<Int>>> {
        Ok(self.conic_complex(c)?.differentials.iter().map(smith_invariants).collect())
    }

    /// Human-readable warnings for elementary divisors other than 1.
    pub fn torsion_warnings(&self) -> Result<Vec<String>> {
        let mut out = Vec::new();
        for (k, c) in self.enumerate_classes().iter().enumerate() {
            for (i, inv) in self.smith_invariants(c)?.iter().enumerate() {
                if inv.iter().any(|x| !x.is_one()) {
                    let s: Vec<String> = inv.iter().map(ToString::to_string).collect();
                    out.push(format!("A{k}: differential {} has elementary divisors [{}]", i + 1, s.join(", ")));
                }
            }
        }
        Ok(out)
    }
}
