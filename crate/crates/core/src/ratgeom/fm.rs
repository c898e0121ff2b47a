//! Fourier–Motzkin elimination for mixed strict/non-strict systems.
//!
//! Equalities are substituted away first. Each derived inequality is strict
//! when either parent is, which makes the emptiness test exact for half-open
//! systems. A witness is recovered by back-substitution through the stored
//! stages.

use std::collections::HashMap;

use num_traits::{One, Signed, Zero};

use super::Rat;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    Le,
    Lt,
    Eq,
}

/// `coeffs . x  rel  rhs`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<Rat>,
    pub rel: Relation,
    pub rhs: Rat,
}

impl Constraint {
    pub fn new(coeffs: Vec<Rat>, rel: Relation, rhs: Rat) -> Self {
        Constraint { coeffs, rel, rhs }
    }

    pub fn holds_at(&self, x: &[Rat]) -> bool {
        let lhs: Rat = self.coeffs.iter().zip(x).map(|(a, b)| a * b).sum();
        match self.rel {
            Relation::Le => lhs <= self.rhs,
            Relation::Lt => lhs < self.rhs,
            Relation::Eq => lhs == self.rhs,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct LinSystem {
    pub dim: usize,
    pub constraints: Vec<Constraint>,
}

impl LinSystem {
    pub fn new(dim: usize) -> Self {
        LinSystem { dim, constraints: Vec::new() }
    }

    pub fn push(&mut self, coeffs: Vec<Rat>, rel: Relation, rhs: Rat) {
        assert_eq!(coeffs.len(), self.dim, "constraint has wrong arity");
        self.constraints.push(Constraint::new(coeffs, rel, rhs));
    }

    /// `lo < a.x <= hi` style two-sided bounds.
    pub fn push_ge(&mut self, coeffs: Vec<Rat>, strict: bool, rhs: Rat) {
        let neg = coeffs.into_iter().map(|c| -c).collect();
        self.push(neg, if strict { Relation::Lt } else { Relation::Le }, -rhs);
    }

    pub fn satisfied_by(&self, x: &[Rat]) -> bool {
        self.constraints.iter().all(|c| c.holds_at(x))
    }

    pub fn is_feasible(&self) -> bool {
        self.find_point().is_some()
    }

    /// A point satisfying every constraint, or `None` if the system is empty.
    pub fn find_point(&self) -> Option<Vec<Rat>> {
        solve(self)
    }
}

/// Inequality in normalised form: `coeffs . x < rhs` (strict) or `<=`.
#[derive(Clone, Debug)]
struct Ineq {
    coeffs: Vec<Rat>,
    rhs: Rat,
    strict: bool,
}

/// `x_var = rhs - sum_{j != var} coeffs_j x_j`, recorded for back-substitution.
struct Substitution {
    var: usize,
    coeffs: Vec<Rat>,
    rhs: Rat,
}

fn solve(sys: &LinSystem) -> Option<Vec<Rat>> {
    let n = sys.dim;
    let mut eqs: Vec<(Vec<Rat>, Rat)> = Vec::new();
    let mut ineqs: Vec<Ineq> = Vec::new();
    for c in &sys.constraints {
        match c.rel {
            Relation::Eq => eqs.push((c.coeffs.clone(), c.rhs.clone())),
            Relation::Le | Relation::Lt => {
                ineqs.push(Ineq { coeffs: c.coeffs.clone(), rhs: c.rhs.clone(), strict: c.rel == Relation::Lt })
            }
        }
    }

    // Gaussian substitution of equalities.
    let mut subs: Vec<Substitution> = Vec::new();
    while let Some((coeffs, rhs)) = eqs.pop() {
        let Some(var) = coeffs.iter().position(|a| !a.is_zero()) else {
            if rhs.is_zero() {
                continue;
            }
            return None;
        };
        let inv = coeffs[var].recip();
        let sub_coeffs: Vec<Rat> = coeffs.iter().map(|a| a * &inv).collect();
        let sub_rhs = &rhs * &inv;
        for (ec, er) in eqs.iter_mut() {
            eliminate_with(ec, er, var, &sub_coeffs, &sub_rhs);
        }
        for q in ineqs.iter_mut() {
            eliminate_with(&mut q.coeffs, &mut q.rhs, var, &sub_coeffs, &sub_rhs);
        }
        subs.push(Substitution { var, coeffs: sub_coeffs, rhs: sub_rhs });
    }

    // Fourier–Motzkin over the remaining variables.
    let mut ineqs = normalise(ineqs)?;
    let mut stages: Vec<(usize, Vec<Ineq>)> = Vec::new();
    let mut remaining: Vec<usize> = (0..n).filter(|v| ineqs.iter().any(|q| !q.coeffs[*v].is_zero())).collect();
    while !remaining.is_empty() {
        // Cheapest variable first: fewest generated pairs.
        let (pos, &var) = remaining
            .iter()
            .enumerate()
            .min_by_key(|(_, &v)| {
                let p = ineqs.iter().filter(|q| q.coeffs[v].is_positive()).count();
                let m = ineqs.iter().filter(|q| q.coeffs[v].is_negative()).count();
                p * m
            })
            .unwrap();
        remaining.remove(pos);
        let (upper, lower): (Vec<&Ineq>, Vec<&Ineq>) =
            ineqs.iter().filter(|q| !q.coeffs[var].is_zero()).partition(|q| q.coeffs[var].is_positive());
        let mut next: Vec<Ineq> = ineqs.iter().filter(|q| q.coeffs[var].is_zero()).cloned().collect();
        for u in &upper {
            for l in &lower {
                let a = &u.coeffs[var];
                let b = -&l.coeffs[var];
                let coeffs: Vec<Rat> = u.coeffs.iter().zip(&l.coeffs).map(|(x, y)| x * &b + y * a).collect();
                let rhs = &u.rhs * &b + &l.rhs * a;
                next.push(Ineq { coeffs, rhs, strict: u.strict || l.strict });
            }
        }
        stages.push((var, std::mem::take(&mut ineqs)));
        ineqs = normalise(next)?;
        remaining.retain(|v| ineqs.iter().any(|q| !q.coeffs[*v].is_zero()));
    }

    // Back-substitution.
    let mut x = vec![Rat::zero(); n];
    for (var, stage) in stages.iter().rev() {
        x[*var] = pick_value(*var, stage, &x);
    }
    for s in subs.iter().rev() {
        let mut v = s.rhs.clone();
        for (j, a) in s.coeffs.iter().enumerate() {
            if j != s.var {
                v -= a * &x[j];
            }
        }
        x[s.var] = v;
    }
    debug_assert!(sys.satisfied_by(&x), "witness violates the system");
    Some(x)
}

fn eliminate_with(coeffs: &mut [Rat], rhs: &mut Rat, var: usize, sub: &[Rat], sub_rhs: &Rat) {
    let f = coeffs[var].clone();
    if f.is_zero() {
        return;
    }
    for (c, s) in coeffs.iter_mut().zip(sub) {
        *c -= &f * s;
    }
    *rhs -= &f * sub_rhs;
}

/// Scales, checks trivial rows and keeps the tightest of each parallel family.
/// Returns `None` when a trivial row is violated.
fn normalise(ineqs: Vec<Ineq>) -> Option<Vec<Ineq>> {
    let mut best: HashMap<Vec<Rat>, (Rat, bool)> = HashMap::new();
    let mut order: Vec<Vec<Rat>> = Vec::new();
    for q in ineqs {
        let Some(lead) = q.coeffs.iter().find(|a| !a.is_zero()).map(Rat::abs) else {
            let ok = if q.strict { Rat::zero() < q.rhs } else { Rat::zero() <= q.rhs };
            if !ok {
                return None;
            }
            continue;
        };
        let inv = lead.recip();
        let coeffs: Vec<Rat> = q.coeffs.iter().map(|a| a * &inv).collect();
        let rhs = &q.rhs * &inv;
        match best.get_mut(&coeffs) {
            Some((r, s)) => {
                if rhs < *r {
                    *r = rhs;
                    *s = q.strict;
                } else if rhs == *r {
                    *s = *s || q.strict;
                }
            }
            None => {
                order.push(coeffs.clone());
                best.insert(coeffs, (rhs, q.strict));
            }
        }
    }
    Some(
        order
            .into_iter()
            .map(|c| {
                let (rhs, strict) = best.remove(&c).unwrap();
                Ineq { coeffs: c, rhs, strict }
            })
            .collect(),
    )
}

/// Chooses a value for `var` given the already fixed later variables.
fn pick_value(var: usize, stage: &[Ineq], x: &[Rat]) -> Rat {
    let mut lo: Option<(Rat, bool)> = None;
    let mut hi: Option<(Rat, bool)> = None;
    for q in stage {
        let a = &q.coeffs[var];
        if a.is_zero() {
            continue;
        }
        let mut rest = q.rhs.clone();
        for (j, c) in q.coeffs.iter().enumerate() {
            if j != var && !c.is_zero() {
                rest -= c * &x[j];
            }
        }
        let bound = rest / a;
        if a.is_positive() {
            if hi.as_ref().is_none_or(|(b, s)| bound < *b || (bound == *b && q.strict && !s)) {
                hi = Some((bound, q.strict));
            }
        } else if lo.as_ref().is_none_or(|(b, s)| bound > *b || (bound == *b && q.strict && !s)) {
            lo = Some((bound, q.strict));
        }
    }
    match (lo, hi) {
        (Some((l, _)), Some((h, _))) => (l + h) / Rat::from_integer(2.into()),
        (Some((l, _)), None) => l + Rat::one(),
        (None, Some((h, _))) => h - Rat::one(),
        (None, None) => Rat::zero(),
    }
}
