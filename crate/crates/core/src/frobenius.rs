//! Conic summands of `R^{1/q}` and the differential-operator dimension report.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::chambers::{CeilingVector, ToricAlgebra};
use crate::error::{Error, Result};
use crate::ratgeom::{Int, Rat};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RootDecomposition {
    pub q: u64,
    /// Class index -> multiplicity; multiplicities sum to `q^d`.
    pub multiplicities: BTreeMap<usize, u64>,
}

impl RootDecomposition {
    pub fn total(&self) -> u64 {
        self.multiplicities.values().sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DModuleReport {
    pub p: u64,
    pub e: u32,
    pub minimal_complete_q: u64,
    /// Global dimension of `End_R(R^{1/p^e})`.
    pub endomorphism_gldim: usize,
    pub lower_bound: usize,
    pub upper_bound: usize,
    pub regular: bool,
    pub text: String,
}

impl ToricAlgebra {
    fn coset_class(&self, q: u64, mut idx: u64) -> usize {
        let d = self.rank();
        let mut v = Vec::with_capacity(d);
        for _ in 0..d {
            v.push(Rat::new(-Int::from(idx % q), Int::from(q)));
            idx /= q;
        }
        let c = self.chamber_of(&v).expect("coset point has rank entries");
        self.class_index_unchecked(&c).expect("every chamber lies in an enumerated class")
    }

    fn coset_count(&self, q: u64) -> Result<u64> {
        q.checked_pow(self.rank() as u32).ok_or_else(|| Error::Unsupported(format!("q^d overflows for q = {q}")))
    }

    /// Classifies `chamber_of(-v/q)` for every `v ∈ {0, …, q-1}^d`.
    pub fn decompose_root(&self, q: u64) -> Result<RootDecomposition> {
        if q == 0 {
            return Err(Error::Input("q must be positive".into()));
        }
        let total = self.coset_count(q)?;
        let classes: Vec<usize> = (0..total).into_par_iter().map(|i| self.coset_class(q, i)).collect();
        let mut multiplicities = BTreeMap::new();
        for k in classes {
            *multiplicities.entry(k).or_insert(0) += 1;
        }
        Ok(RootDecomposition { q, multiplicities })
    }

    /// Least `q` for which `R^{1/q}` contains every class, searched up to the configured cap.
    pub fn minimal_complete_q(&self) -> Result<u64> {
        let n = self.enumerate_classes().len();
        let cap = self.config().frobenius_cap;
        for q in 1..=cap {
            let total = self.coset_count(q)?;
            let mut hit = vec![false; n];
            let mut count = 0;
            for i in 0..total {
                let k = self.coset_class(q, i);
                if !hit[k] {
                    hit[k] = true;
                    count += 1;
                    if count == n {
                        return Ok(q);
                    }
                }
            }
        }
        Err(Error::CapExceeded { cap })
    }

    pub fn dmodule_report(&self, p: u64) -> Result<DModuleReport> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let q = self.minimal_complete_q()?;
        let mut e = 0u32;
        let mut pe: u64 = 1;
        while pe < q {
            pe = pe.checked_mul(p).ok_or_else(|| Error::Unsupported("p^e overflows".into()))?;
            e += 1;
        }
        let d = self.rank();
        let regular = self.enumerate_classes().len() == 1;
        let mut text = format!(
            "p = {p}: smallest e with p^e >= {q} is e = {e}. For every such e, End_R(R^(1/p^e)) has global dimension {d}. \
             Hence {d} <= gl.dim D(R) <= {}; equality with {d} is expected but not established.",
            d + 1
        );
        if regular {
            text.push_str(" R is regular (a single conic class), so R^(1/q) is free for every q.");
        }
        Ok(DModuleReport {
            p,
            e,
            minimal_complete_q: q,
            endomorphism_gldim: d,
            lower_bound: d,
            upper_bound: d + 1,
            regular,
            text,
        })
    }

    /// The chamber of `-v/q` for a coset representative `v`.
    pub fn coset_chamber(&self, q: u64, v: &[i64]) -> Result<CeilingVector> {
        let v: Vec<Rat> = v.iter().map(|&x| Rat::new(Int::from(-x), Int::from(q))).collect();
        self.chamber_of(&v)
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= p {
        if p.is_multiple_of(k) {
            return false;
        }
        k += 1;
    }
    true
}
