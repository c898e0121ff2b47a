//! Dense row-major matrices over exact integers and rationals.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{Int, Rat};

/// A dense matrix with explicit shape, so empty matrices keep their dimensions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    nrows: usize,
    ncols: usize,
    data: Vec<T>,
}

pub type IntMat = Matrix<Int>;
pub type QMat = Matrix<Rat>;

impl<T: Clone + Zero> Matrix<T> {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Matrix { nrows, ncols, data: vec![T::zero(); nrows * ncols] }
    }

    /// Builds a matrix from rows; `ncols` is needed when `rows` is empty.
    pub fn from_rows(ncols: usize, rows: Vec<Vec<T>>) -> Self {
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * ncols);
        for r in rows {
            assert_eq!(r.len(), ncols, "ragged matrix row");
            data.extend(r);
        }
        Matrix { nrows, ncols, data }
    }

    pub fn transpose(&self) -> Self {
        let mut t = Matrix::zeros(self.ncols, self.nrows);
        for i in 0..self.nrows {
            for j in 0..self.ncols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }
}

impl<T> Matrix<T> {
    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.ncols..(i + 1) * self.ncols]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[T]> {
        (0..self.nrows).map(move |i| self.row(i))
    }

    pub fn map<U, F: FnMut(&T) -> U>(&self, f: F) -> Matrix<U> {
        Matrix { nrows: self.nrows, ncols: self.ncols, data: self.data.iter().map(f).collect() }
    }
}

impl<T: Zero> Matrix<T> {
    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn nonzero_count(&self) -> usize {
        self.data.iter().filter(|x| !x.is_zero()).count()
    }
}

impl<T> std::ops::Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        assert!(i < self.nrows && j < self.ncols, "matrix index out of range");
        &self.data[i * self.ncols + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        assert!(i < self.nrows && j < self.ncols, "matrix index out of range");
        &mut self.data[i * self.ncols + j]
    }
}

impl<T: Clone + Zero + std::ops::Mul<Output = T> + std::ops::Add<Output = T>> Matrix<T> {
    pub fn mul(&self, other: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.ncols, other.nrows, "matrix shapes do not compose");
        let mut out: Matrix<T> = Matrix::zeros(self.nrows, other.ncols);
        for i in 0..self.nrows {
            for k in 0..self.ncols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.ncols {
                    let v = out[(i, j)].clone() + a.clone() * other[(k, j)].clone();
                    out[(i, j)] = v;
                }
            }
        }
        out
    }
}

impl<T: fmt::Display> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.nrows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.ncols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.data[i * self.ncols + j])?;
            }
        }
        write!(f, "]")
    }
}

impl IntMat {
    pub fn to_rational(&self) -> QMat {
        self.map(|x| BigRational::from_integer(x.clone()))
    }

    pub fn from_i64(ncols: usize, rows: &[Vec<i64>]) -> Self {
        IntMat::from_rows(ncols, rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
    }
}

/// Row echelon data of a rational matrix.
#[derive(Clone, Debug)]
pub struct Rref {
    pub matrix: QMat,
    pub pivots: Vec<usize>,
}

/// Reduced row echelon form over Q.
pub fn rref(m: &QMat) -> Rref {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..a.ncols() {
        if r == a.nrows() {
            break;
        }
        let Some(p) = (r..a.nrows()).find(|&i| !a[(i, c)].is_zero()) else { continue };
        if p != r {
            for j in 0..a.ncols() {
                let tmp = a[(p, j)].clone();
                a[(p, j)] = a[(r, j)].clone();
                a[(r, j)] = tmp;
            }
        }
        let inv = a[(r, c)].recip();
        for j in c..a.ncols() {
            let v = &a[(r, j)] * &inv;
            a[(r, j)] = v;
        }
        for i in 0..a.nrows() {
            if i == r || a[(i, c)].is_zero() {
                continue;
            }
            let f = a[(i, c)].clone();
            for j in c..a.ncols() {
                let v = &a[(i, j)] - &f * &a[(r, j)];
                a[(i, j)] = v;
            }
        }
        pivots.push(c);
        r += 1;
    }
    Rref { matrix: a, pivots }
}

pub fn rank_q(m: &QMat) -> usize {
    rref(m).pivots.len()
}

pub fn rank_z(m: &IntMat) -> usize {
    rank_q(&m.to_rational())
}

/// Basis of the right kernel {x : m x = 0} over Q, one vector per free column,
/// ordered by free column and scaled to primitive integer vectors.
pub fn kernel_basis(m: &QMat) -> Vec<Vec<Int>> {
    let Rref { matrix, pivots } = rref(m);
    let n = m.ncols();
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rat::zero(); n];
            v[f] = Rat::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -matrix[(r, f)].clone();
            }
            primitive_from_rational(&v)
        })
        .collect()
}

/// Scales a rational vector to the primitive integer vector on the same ray.
/// The zero vector maps to itself.
pub fn primitive_from_rational(v: &[Rat]) -> Vec<Int> {
    let mut l = Int::one();
    for x in v {
        l = l.lcm(x.denom());
    }
    let ints: Vec<Int> = v.iter().map(|x| (x * Rat::from_integer(l.clone())).to_integer()).collect();
    primitive(&ints)
}

/// Divides an integer vector by the gcd of its entries.
pub fn primitive(v: &[Int]) -> Vec<Int> {
    let g = v.iter().fold(Int::zero(), |g, x| g.gcd(x));
    if g.is_zero() || g.is_one() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}

pub fn is_primitive(v: &[Int]) -> bool {
    v.iter().fold(Int::zero(), |g, x| g.gcd(x)).is_one()
}

pub fn dot_z(a: &[Int], b: &[Int]) -> Int {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn dot_q(a: &[Rat], b: &[Int]) -> Rat {
    a.iter().zip(b).fold(Rat::zero(), |acc, (x, y)| acc + x * Rat::from_integer(y.clone()))
}

/// Determinant over Q by elimination.
pub fn det_q(m: &QMat) -> Rat {
    assert_eq!(m.nrows(), m.ncols(), "determinant of non-square matrix");
    let n = m.nrows();
    let mut a = m.clone();
    let mut det = Rat::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[(i, c)].is_zero()) else { return Rat::zero() };
        if p != c {
            for j in 0..n {
                let tmp = a[(p, j)].clone();
                a[(p, j)] = a[(c, j)].clone();
                a[(c, j)] = tmp;
            }
            det = -det;
        }
        let piv = a[(c, c)].clone();
        det *= &piv;
        for i in c + 1..n {
            if a[(i, c)].is_zero() {
                continue;
            }
            let f = &a[(i, c)] / &piv;
            for j in c..n {
                let v = &a[(i, j)] - &f * &a[(c, j)];
                a[(i, j)] = v;
            }
        }
    }
    det
}

/// Solves `a x = b` over Q. Returns any solution (free variables set to zero)
/// or `None` if the system is inconsistent.
pub fn solve_q(a: &QMat, b: &[Rat]) -> Option<Vec<Rat>> {
    assert_eq!(a.nrows(), b.len());
    let n = a.ncols();
    let mut aug = QMat::zeros(a.nrows(), n + 1);
    for i in 0..a.nrows() {
        for j in 0..n {
            aug[(i, j)] = a[(i, j)].clone();
        }
        aug[(i, n)] = b[i].clone();
    }
    let Rref { matrix, pivots } = rref(&aug);
    if pivots.last() == Some(&n) {
        return None;
    }
    let mut x = vec![Rat::zero(); n];
    for (r, &p) in pivots.iter().enumerate() {
        x[p] = matrix[(r, n)].clone();
    }
    Some(x)
}

/// Solves `a x = b` for an integer vector `x`, where `a` (t x d) has full column
/// rank. Returns `None` when no solution exists or the unique rational solution
/// is not integral.
pub fn lattice_solve(a: &IntMat, b: &[Int]) -> Option<Vec<Int>> {
    let q = a.to_rational();
    let bq: Vec<Rat> = b.iter().map(|x| Rat::from_integer(x.clone())).collect();
    let x = solve_q(&q, &bq)?;
    if rank_q(&q) < a.ncols() {
        // Solutions are not unique; fall back to an integer search through the HNF.
        return lattice_solve_general(a, b);
    }
    if x.iter().all(|v| v.is_integer()) {
        Some(x.into_iter().map(|v| v.to_integer()).collect())
    } else {
        None
    }
}

fn lattice_solve_general(a: &IntMat, b: &[Int]) -> Option<Vec<Int>> {
    // Column HNF of `a` via unimodular column operations: a U = H.
    let (h, u) = column_hnf_with_transform(a);
    let mut y = vec![Int::zero(); a.ncols()];
    let mut residual = b.to_vec();
    let mut col = 0;
    for i in 0..h.nrows() {
        if col < h.ncols() && !h[(i, col)].is_zero() {
            let (q, r) = residual[i].div_rem(&h[(i, col)]);
            if !r.is_zero() {
                return None;
            }
            for k in 0..h.nrows() {
                residual[k] -= &q * &h[(k, col)];
            }
            y[col] = q;
            col += 1;
        } else if !residual[i].is_zero() {
            return None;
        }
    }
    if residual.iter().any(|r| !r.is_zero()) {
        return None;
    }
    let x = (0..a.ncols()).map(|i| (0..a.ncols()).map(|j| &u[(i, j)] * &y[j]).sum()).collect();
    Some(x)
}

/// Column-style echelon form `a * u = h` with `u` unimodular. Nonzero columns of
/// `h` come first and are in echelon form going down the rows.
pub fn column_hnf_with_transform(a: &IntMat) -> (IntMat, IntMat) {
    let (ht, ut) = row_hnf_with_transform(&a.transpose());
    (ht.transpose(), ut.transpose())
}

/// Row Hermite normal form `u * a = h`, `u` unimodular. Pivots are positive and
/// entries above each pivot are reduced into `[0, pivot)`.
pub fn row_hnf_with_transform(a: &IntMat) -> (IntMat, IntMat) {
    let m = a.nrows();
    let n = a.ncols();
    let mut h = a.clone();
    let mut u = identity(m);
    let mut r = 0;
    for c in 0..n {
        if r == m {
            break;
        }
        // Euclid on column c among rows r.. until one nonzero remains.
        loop {
            let nz: Vec<usize> = (r..m).filter(|&i| !h[(i, c)].is_zero()).collect();
            if nz.is_empty() {
                break;
            }
            let p = *nz.iter().min_by_key(|&&i| h[(i, c)].abs()).unwrap();
            swap_rows(&mut h, r, p);
            swap_rows(&mut u, r, p);
            if nz.len() == 1 {
                break;
            }
            for i in r + 1..m {
                if h[(i, c)].is_zero() {
                    continue;
                }
                let q = h[(i, c)].div_floor(&h[(r, c)]);
                add_row_multiple(&mut h, i, r, &-q.clone());
                add_row_multiple(&mut u, i, r, &-q);
            }
        }
        if h[(r, c)].is_zero() {
            continue;
        }
        if h[(r, c)].is_negative() {
            negate_row(&mut h, r);
            negate_row(&mut u, r);
        }
        for i in 0..r {
            let q = h[(i, c)].div_floor(&h[(r, c)]);
            if !q.is_zero() {
                add_row_multiple(&mut h, i, r, &-q.clone());
                add_row_multiple(&mut u, i, r, &-q);
            }
        }
        r += 1;
    }
    (h, u)
}

/// The nonzero rows of the row HNF of `a`.
pub fn row_hnf(a: &IntMat) -> IntMat {
    let (h, _) = row_hnf_with_transform(a);
    let rows: Vec<Vec<Int>> = h.rows().filter(|r| r.iter().any(|x| !x.is_zero())).map(<[Int]>::to_vec).collect();
    IntMat::from_rows(a.ncols(), rows)
}

pub fn identity(n: usize) -> IntMat {
    let mut m = IntMat::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = Int::one();
    }
    m
}

fn swap_rows<T: Clone>(m: &mut Matrix<T>, a: usize, b: usize) {
    if a == b {
        return;
    }
    for j in 0..m.ncols {
        m.data.swap(a * m.ncols + j, b * m.ncols + j);
    }
}

fn add_row_multiple(m: &mut IntMat, target: usize, source: usize, f: &Int) {
    for j in 0..m.ncols {
        let v = &m[(target, j)] + f * &m[(source, j)];
        m[(target, j)] = v;
    }
}

fn negate_row(m: &mut IntMat, r: usize) {
    for j in 0..m.ncols {
        let v = -m[(r, j)].clone();
        m[(r, j)] = v;
    }
}

/// Elementary divisors (the nonzero diagonal of the Smith normal form), in
/// divisibility order.
pub fn smith_invariants(a: &IntMat) -> Vec<Int> {
    let mut m = a.clone();
    let (rows, cols) = (m.nrows(), m.ncols());
    let mut out = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // Pick the smallest nonzero entry in the trailing block as pivot.
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !m[(i, j)].is_zero() && best.is_none_or(|(bi, bj)| m[(i, j)].abs() < m[(bi, bj)].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        swap_rows(&mut m, t, pi);
        for i in 0..rows {
            m.data.swap(i * cols + t, i * cols + pj);
        }
        let mut clean = true;
        for i in t + 1..rows {
            if m[(i, t)].is_zero() {
                continue;
            }
            let q = m[(i, t)].div_floor(&m[(t, t)]);
            add_row_multiple(&mut m, i, t, &-q);
            if !m[(i, t)].is_zero() {
                clean = false;
            }
        }
        for j in t + 1..cols {
            if m[(t, j)].is_zero() {
                continue;
            }
            let q = m[(t, j)].div_floor(&m[(t, t)]);
            for i in 0..rows {
                let v = &m[(i, j)] - &q * &m[(i, t)];
                m[(i, j)] = v;
            }
            if !m[(t, j)].is_zero() {
                clean = false;
            }
        }
        if !clean {
            continue;
        }
        // Enforce divisibility of the rest of the block by the pivot.
        let piv = m[(t, t)].clone();
        let bad = (t + 1..rows)
            .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
            .find(|&(i, j)| !m[(i, j)].is_multiple_of(&piv));
        if let Some((i, _)) = bad {
            add_row_multiple(&mut m, t, i, &Int::one());
            continue;
        }
        out.push(piv.abs());
        t += 1;
    }
    out
}

pub fn int_vec(v: &[i64]) -> Vec<Int> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn rat_vec(v: &[Int]) -> Vec<Rat> {
    v.iter().map(|x| Rat::from_integer(x.clone())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>]) -> IntMat {
        IntMat::from_i64(rows.first().map_or(0, Vec::len), rows)
    }

    #[test]
    fn rank_of_dependent_rows() {
        assert_eq!(rank_z(&m(&[vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 1]])), 2);
        assert_eq!(rank_z(&IntMat::zeros(0, 3)), 0);
    }

    #[test]
    fn hnf_is_unimodular_transform() {
        let a = m(&[vec![1, 0, -1, 0], vec![0, 1, 0, -1], vec![0, 0, 1, 1]]);
        let (h, u) = row_hnf_with_transform(&a);
        assert_eq!(u.mul(&a), h);
        assert_eq!(det_q(&u.to_rational()).abs(), Rat::one());
    }

    #[test]
    fn smith_of_diagonal_and_mixed() {
        assert_eq!(smith_invariants(&m(&[vec![2, 0], vec![0, 3]])), int_vec(&[1, 6]));
        assert_eq!(smith_invariants(&m(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]])), int_vec(&[2, 6, 12]));
        assert_eq!(smith_invariants(&m(&[vec![1, -1]])), int_vec(&[1]));
    }

    #[test]
    fn lattice_solve_detects_non_integral() {
        let a = m(&[vec![2], vec![4]]);
        assert_eq!(lattice_solve(&a, &int_vec(&[2, 4])), Some(int_vec(&[1])));
        assert_eq!(lattice_solve(&a, &int_vec(&[1, 2])), None);
        assert_eq!(lattice_solve(&a, &int_vec(&[2, 3])), None);
    }

    #[test]
    fn kernel_of_single_row() {
        let k = kernel_basis(&m(&[vec![1, 1, 0]]).to_rational());
        assert_eq!(k, vec![int_vec(&[-1, 1, 0]), int_vec(&[0, 0, 1])]);
    }
}
