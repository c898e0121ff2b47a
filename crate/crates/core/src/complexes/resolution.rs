//! Projective resolutions of graded simples over `End(⊕ support)`.
//!
//! For a support that contains every open conic class of a chamber the conic
//! complex is already the resolution. Otherwise each excluded summand is
//! replaced once by its own conic complex, the connecting maps are solved for
//! exactly over Q, isomorphic summand pairs are cancelled, and the result is
//! re-verified on a window.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;
use serde::Serialize;

use super::{check_acyclic, AcyclicityReport, ModuleComplex, Window};
use crate::chambers::{CeilingVector, ToricAlgebra};
use crate::error::{Error, Result};
use crate::ratgeom::{solve_q, QMat, Rat};

#[derive(Clone, Debug, Serialize)]
pub struct ResolutionReport {
    pub chamber: CeilingVector,
    pub class: usize,
    /// True when excluded summands had to be replaced.
    pub spliced: bool,
    /// Class multiplicities per homological degree before cancellation.
    pub shape: Vec<BTreeMap<usize, usize>>,
    /// Class multiplicities after cancelling isomorphic summand pairs.
    pub minimal_shape: Vec<BTreeMap<usize, usize>>,
    pub pdim: usize,
    #[serde(skip)]
    pub complex: ModuleComplex,
    /// Window re-verification of a spliced complex, one entry per support class.
    pub verification: Vec<AcyclicityReport>,
}

impl ResolutionReport {
    pub fn verified(&self) -> bool {
        self.verification.iter().all(AcyclicityReport::passed)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum NccrVerdict {
    Nccr,
    NotNccr { witness: CeilingVector, pdim: usize },
    Inconclusive { reasons: Vec<String> },
}

/// Where a summand of the spliced complex comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Origin {
    /// Summand `s` of degree `j` of the original complex.
    Kept { s: usize },
    /// Summand `r` of degree `k` of the replacement for excluded summand `e`.
    Sub { e: usize, k: usize, r: usize },
}

struct Excluded {
    degree: usize,
    index: usize,
    complex: ModuleComplex,
}

impl ToricAlgebra {
    /// Resolves class indices or representatives into a sorted set of class indices.
    pub fn support_indices(&self, support: &[CeilingVector]) -> Result<BTreeSet<usize>> {
        support.iter().map(|c| self.class_index(c)).collect()
    }

    pub fn resolution(&self, support: &[CeilingVector], c: &CeilingVector) -> Result<ResolutionReport> {
        let set = self.support_indices(support)?;
        let class = self.class_index(c)?;
        if !set.contains(&class) {
            return Err(Error::OutsideSupport(c.to_string()));
        }
        let k = self.conic_complex(c)?.to_module_complex();
        let excluded: Vec<(usize, usize)> = k
            .terms
            .iter()
            .enumerate()
            .flat_map(|(j, ts)| ts.iter().enumerate().map(move |(s, t)| (j, s, t)))
            .filter(|(_, _, t)| !set.contains(&self.class_index_unchecked(t).expect("feasible term")))
            .map(|(j, s, _)| (j, s))
            .collect();
        if excluded.is_empty() {
            let shape = k.class_shape(self);
            return Ok(ResolutionReport {
                chamber: c.clone(),
                class,
                spliced: false,
                minimal_shape: shape.clone(),
                shape,
                pdim: k.length(),
                complex: k,
                verification: Vec::new(),
            });
        }
        let spliced = self.splice(&k, &excluded, &set)?;
        spliced.check_square_zero()?;
        let shape = spliced.class_shape(self);
        let minimal = minimise(spliced);
        minimal.check_square_zero()?;
        let reps = self.enumerate_classes();
        let verification: Vec<AcyclicityReport> = set
            .iter()
            .map(|&i| {
                let w = Window::default_for(self.rank(), c, &reps[i]);
                check_acyclic(self, &minimal, c, &reps[i], &w)
            })
            .collect();
        Ok(ResolutionReport {
            chamber: c.clone(),
            class,
            spliced: true,
            shape,
            minimal_shape: minimal.class_shape(self),
            pdim: minimal.length(),
            complex: minimal,
            verification,
        })
    }

    fn splice(&self, k: &ModuleComplex, excluded: &[(usize, usize)], set: &BTreeSet<usize>) -> Result<ModuleComplex> {
        let mut subs: Vec<Excluded> = Vec::new();
        let mut offending: Vec<String> = Vec::new();
        for &(j, s) in excluded {
            let e = self.conic_complex(&k.terms[j][s])?.to_module_complex();
            for (kk, ts) in e.terms.iter().enumerate().skip(1) {
                for t in ts {
                    let cls = self.class_index_unchecked(t).expect("feasible term");
                    if !set.contains(&cls) {
                        offending.push(format!(
                            "summand {} in degree {j} needs A{cls} ({t}) in degree {}",
                            k.terms[j][s],
                            j + kk - 1
                        ));
                    }
                }
            }
            subs.push(Excluded { degree: j, index: s, complex: e });
        }
        if !offending.is_empty() {
            return Err(Error::SupportNotClosed(offending.join("; ")));
        }
        let is_excluded = |j: usize, s: usize| excluded.contains(&(j, s));

        // Summands of the spliced complex per degree.
        let top = subs.iter().map(|x| x.degree + x.complex.terms.len() - 2).chain([k.terms.len() - 1]).max().unwrap();
        let mut origin: Vec<Vec<Origin>> = vec![Vec::new(); top + 1];
        for (j, ts) in k.terms.iter().enumerate() {
            for s in 0..ts.len() {
                if !is_excluded(j, s) {
                    origin[j].push(Origin::Kept { s });
                }
            }
        }
        for (e, x) in subs.iter().enumerate() {
            for (kk, ts) in x.complex.terms.iter().enumerate().skip(1) {
                for r in 0..ts.len() {
                    origin[x.degree + kk - 1].push(Origin::Sub { e, k: kk, r });
                }
            }
        }
        let ceiling = |deg: usize, o: Origin| -> CeilingVector {
            match o {
                Origin::Kept { s } => k.terms[deg][s].clone(),
                Origin::Sub { e, k: kk, r } => subs[e].complex.terms[kk][r].clone(),
            }
        };
        let terms: Vec<Vec<CeilingVector>> =
            origin.iter().enumerate().map(|(deg, os)| os.iter().map(|&o| ceiling(deg, o)).collect()).collect();
        // ε_e: the augmentation E_1 -> summand of replacement e.
        let eps = |e: usize, r: usize| -> Rat { subs[e].complex.maps[0][(0, r)].clone() };
        let kmap = |deg: usize, row: usize, col: usize| -> Rat {
            if deg < k.maps.len() {
                k.maps[deg][(row, col)].clone()
            } else {
                Rat::zero()
            }
        };

        let mut maps: Vec<QMat> = Vec::with_capacity(top);
        for i in 1..=top {
            let (rows, cols) = (&origin[i - 1], &origin[i]);
            let mut d = QMat::zeros(rows.len(), cols.len());
            let mut unknown: Vec<(usize, usize)> = Vec::new();
            for (a, &y) in rows.iter().enumerate() {
                for (b, &x) in cols.iter().enumerate() {
                    match (y, x) {
                        (Origin::Kept { s: sy }, Origin::Kept { s: sx }) => d[(a, b)] = kmap(i - 1, sy, sx),
                        (Origin::Kept { s: sy }, Origin::Sub { e, k: 1, r }) => {
                            d[(a, b)] = kmap(i - 1, sy, subs[e].index) * eps(e, r)
                        }
                        (Origin::Kept { .. }, Origin::Sub { .. }) => {}
                        (Origin::Sub { e: ey, k: ky, r: ry }, Origin::Sub { e: ex, r: rx, .. }) if ey == ex => {
                            d[(a, b)] = subs[ey].complex.maps[ky][(ry, rx)].clone()
                        }
                        (Origin::Sub { .. }, _) => {
                            if self.leq(&terms[i][b], &terms[i - 1][a]) {
                                unknown.push((a, b));
                            }
                        }
                    }
                }
            }
            if !unknown.is_empty() {
                self.solve_connecting(i, &origin, &subs, k, maps.last(), &mut d, &unknown)?;
            }
            maps.push(d);
        }
        Ok(ModuleComplex { terms, maps })
    }

    /// Fills the unknown entries of `d_i` from the lifting equations and `d_{i-1} d_i = 0`.
    #[allow(clippy::too_many_arguments)]
    fn solve_connecting(
        &self,
        i: usize,
        origin: &[Vec<Origin>],
        subs: &[Excluded],
        k: &ModuleComplex,
        prev: Option<&QMat>,
        d: &mut QMat,
        unknown: &[(usize, usize)],
    ) -> Result<()> {
        let var: BTreeMap<(usize, usize), usize> = unknown.iter().enumerate().map(|(v, &p)| (p, v)).collect();
        let (rows, cols) = (&origin[i - 1], &origin[i]);
        let mut eqs: Vec<(Vec<Rat>, Rat)> = Vec::new();
        // Each entry of d_i is either fixed or one unknown; express a linear form in them.
        let entry = |a: usize, b: usize, coeff: &Rat, lhs: &mut Vec<Rat>, rhs: &mut Rat| {
            if let Some(&v) = var.get(&(a, b)) {
                lhs[v] += coeff;
            } else {
                *rhs -= coeff * &d[(a, b)];
            }
        };
        let kmap = |deg: usize, row: usize, col: usize| -> Rat {
            if deg < k.maps.len() {
                k.maps[deg][(row, col)].clone()
            } else {
                Rat::zero()
            }
        };
        // Lifting: ε_e ∘ d_i(x -> E_{e,1}) equals the component of d_K through the excluded summand.
        for (e, x) in subs.iter().enumerate() {
            if x.degree + 1 != i {
                continue;
            }
            for (b, &col) in cols.iter().enumerate() {
                let mut lhs = vec![Rat::zero(); unknown.len()];
                let mut rhs = match col {
                    Origin::Kept { s } => kmap(i - 1, x.index, s),
                    Origin::Sub { e: ex, k: 1, r } => {
                        kmap(i - 1, x.index, subs[ex].index) * subs[ex].complex.maps[0][(0, r)].clone()
                    }
                    Origin::Sub { .. } => Rat::zero(),
                };
                for (a, &row) in rows.iter().enumerate() {
                    if let Origin::Sub { e: ey, k: 1, r } = row {
                        if ey == e {
                            let c = x.complex.maps[0][(0, r)].clone();
                            if !c.is_zero() {
                                entry(a, b, &c, &mut lhs, &mut rhs);
                            }
                        }
                    }
                }
                eqs.push((lhs, rhs));
            }
        }
        // d_{i-1} d_i = 0.
        if let Some(p) = prev {
            for z in 0..p.nrows() {
                for b in 0..cols.len() {
                    let mut lhs = vec![Rat::zero(); unknown.len()];
                    let mut rhs = Rat::zero();
                    for a in 0..rows.len() {
                        let c = &p[(z, a)];
                        if !c.is_zero() {
                            entry(a, b, c, &mut lhs, &mut rhs);
                        }
                    }
                    eqs.push((lhs, rhs));
                }
            }
        }
        let a = QMat::from_rows(unknown.len(), eqs.iter().map(|(l, _)| l.clone()).collect());
        let b: Vec<Rat> = eqs.into_iter().map(|(_, r)| r).collect();
        let sol = solve_q(&a, &b).ok_or_else(|| {
            Error::SupportNotClosed(format!("connecting maps into degree {} have no solution", i - 1))
        })?;
        for (v, &(r, c)) in unknown.iter().enumerate() {
            d[(r, c)] = sol[v].clone();
        }
        Ok(())
    }

    /// Verdict for `End(⊕ support)`; `None` means the complete sum.
    pub fn nccr_verdict(&self, support: Option<&[CeilingVector]>) -> Result<NccrVerdict> {
        let d = self.rank();
        let classes = self.enumerate_classes();
        let set = match support {
            None => (0..classes.len()).collect(),
            Some(s) => self.support_indices(s)?,
        };
        if set.is_empty() {
            return Err(Error::Input("support is empty".into()));
        }
        if !set.contains(&self.free_class_index()) {
            return Err(Error::Input("support must contain the free class".into()));
        }
        if set.len() == classes.len() {
            let mut witness = None;
            for c in classes {
                if !self.has_zero_cell(c)? {
                    witness = Some((c.clone(), self.pdim_simple(c)?));
                    break;
                }
            }
            let simplicial = self.cone().is_simplicial();
            if simplicial != witness.is_none() {
                return Err(Error::Invariant("0-cell test disagrees with simpliciality".into()));
            }
            return Ok(match witness {
                None => NccrVerdict::Nccr,
                Some((witness, pdim)) => NccrVerdict::NotNccr { witness, pdim },
            });
        }
        let reps: Vec<CeilingVector> = set.iter().map(|&i| classes[i].clone()).collect();
        let mut reasons = Vec::new();
        let mut short = None;
        for c in &reps {
            match self.resolution(&reps, c) {
                Ok(r) => {
                    if !r.verified() {
                        reasons.push(format!("resolution of {c} failed window verification"));
                    } else if r.pdim < d && short.is_none() {
                        short = Some((c.clone(), r.pdim));
                    }
                }
                Err(Error::SupportNotClosed(msg)) => reasons.push(format!("resolution of {c}: {msg}")),
                Err(e) => return Err(e),
            }
        }
        if let Some((witness, pdim)) = short {
            return Ok(NccrVerdict::NotNccr { witness, pdim });
        }
        for a in &reps {
            for b in &reps {
                if !self.hom_is_conic(a, b)? {
                    reasons.push(format!("Hom({a}, {b}) is not conic"));
                }
            }
        }
        Ok(if reasons.is_empty() { NccrVerdict::Nccr } else { NccrVerdict::Inconclusive { reasons } })
    }
}

/// Cancels nonzero entries between equal summands (graded isomorphisms) by
/// Gaussian elimination for complexes until none remain.
pub(crate) fn minimise(mut c: ModuleComplex) -> ModuleComplex {
    'outer: loop {
        for i in 0..c.maps.len() {
            let m = &c.maps[i];
            for y in 0..m.nrows() {
                for x in 0..m.ncols() {
                    if !m[(y, x)].is_zero() && c.terms[i + 1][x] == c.terms[i][y] {
                        cancel(&mut c, i, y, x);
                        continue 'outer;
                    }
                }
            }
        }
        break;
    }
    while c.terms.len() > 1 && c.terms.last().is_some_and(Vec::is_empty) {
        c.terms.pop();
        c.maps.pop();
    }
    c
}

/// Removes summand `x` of degree `i+1` and `y` of degree `i`, where
/// `maps[i][(y, x)]` is invertible.
fn cancel(c: &mut ModuleComplex, i: usize, y: usize, x: usize) {
    let m = &c.maps[i];
    let inv = m[(y, x)].recip();
    let rows: Vec<usize> = (0..m.nrows()).filter(|&r| r != y).collect();
    let cols: Vec<usize> = (0..m.ncols()).filter(|&k| k != x).collect();
    let mut reduced = QMat::zeros(rows.len(), cols.len());
    for (a, &r) in rows.iter().enumerate() {
        for (b, &k) in cols.iter().enumerate() {
            reduced[(a, b)] = &m[(r, k)] - &m[(r, x)] * &inv * &m[(y, k)];
        }
    }
    c.maps[i] = reduced;
    if i + 1 < c.maps.len() {
        c.maps[i + 1] = drop_row(&c.maps[i + 1], x);
    }
    if i > 0 {
        c.maps[i - 1] = drop_col(&c.maps[i - 1], y);
    }
    c.terms[i + 1].remove(x);
    c.terms[i].remove(y);
}

fn drop_row(m: &QMat, r: usize) -> QMat {
    QMat::from_rows(m.ncols(), (0..m.nrows()).filter(|&k| k != r).map(|k| m.row(k).to_vec()).collect())
}

fn drop_col(m: &QMat, c: usize) -> QMat {
    QMat::from_rows(
        m.ncols() - 1,
        (0..m.nrows())
            .map(|k| m.row(k).iter().enumerate().filter(|(j, _)| *j != c).map(|(_, v)| v.clone()).collect())
            .collect(),
    )
}
